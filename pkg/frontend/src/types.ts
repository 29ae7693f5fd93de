export interface SelectableTag {
  label: string;
  count: number;
}

export interface ResourceCard {
  id: string;
  label: string;
  uri: string | null;
}

export interface CacheStats {
  lookups: number;
  hits: number;
  stores: number;
  entries: number;
}

export interface SessionView {
  id: string;
  collection: string;
  strategy: 'none' | 'query' | 'resource';
  activeTags: string[];
  selectableTags: SelectableTag[];
  resources: ResourceCard[];
  totalResources: number;
  page: number;
  pageSize: number;
  totalPages: number;
  lastActionMicros: number | null;
  lastActionHit: boolean | null;
  cacheStats: CacheStats;
}

export interface CollectionInfo {
  name: string;
  resources: number;
  tags: number;
}

export type ActionOp = 'add' | 'remove';

export interface ErrorBody {
  error: string;
  message: string;
  detail?: unknown;
}
