import { ApiClient } from './api';
import type { ActionOp, SessionView } from './types';

export type ActionSink = (op: ActionOp, tag: string) => void;

const PAGE_SIZE = 12;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function formatMicros(us: number | null): string {
  if (us === null) return '–';
  if (us >= 1000) return `${(us / 1000).toFixed(2)} ms`;
  return `${us.toFixed(1)} µs`;
}

/**
 * One browsing session bound to one strategy.
 *
 * Every number on screen comes from the last server response; the panel
 * never recomputes tag counts or resource sets locally. At most one
 * request is in flight: clicks arriving while a request is pending are
 * suppressed.
 */
export class SessionPanel {
  readonly root: HTMLElement;
  view: SessionView | null = null;
  pending = false;

  private client: ApiClient;
  private page = 1;
  private sink: ActionSink;
  private lastError: { op: ActionOp; tag: string; message: string } | null = null;

  constructor(root: HTMLElement, client: ApiClient, actionSink?: ActionSink) {
    this.root = root;
    this.client = client;
    this.sink = actionSink ?? ((op, tag) => void this.dispatch(op, tag));
    this.root.classList.add('panel');
  }

  async start(collection: string, strategy: string): Promise<void> {
    this.pending = true;
    try {
      this.view = await this.client.createSession(collection, strategy);
      this.page = this.view.page;
      this.lastError = null;
    } finally {
      this.pending = false;
    }
    this.render();
  }

  /** Apply one action against this panel's session and re-render. */
  async dispatch(op: ActionOp, tag: string): Promise<void> {
    if (this.pending || !this.view) return;
    this.pending = true;
    this.renderPendingMarker();
    try {
      this.view = await this.client.applyAction(
        this.view.id, op, tag, this.page, PAGE_SIZE,
      );
      this.page = this.view.page;
      this.lastError = null;
    } catch (err) {
      this.lastError = { op, tag, message: err instanceof Error ? err.message : String(err) };
    } finally {
      this.pending = false;
    }
    this.render();
  }

  async setPage(page: number): Promise<void> {
    if (this.pending || !this.view) return;
    this.pending = true;
    try {
      this.view = await this.client.getSession(this.view.id, page, PAGE_SIZE);
      this.page = this.view.page;
    } catch (err) {
      this.lastError = {
        op: 'add', tag: '',
        message: err instanceof Error ? err.message : String(err),
      };
    } finally {
      this.pending = false;
    }
    this.render();
  }

  private onTagClick(label: string): void {
    if (this.pending) return;
    this.sink('add', label);
  }

  private onChipRemove(label: string): void {
    if (this.pending) return;
    this.sink('remove', label);
  }

  private renderPendingMarker(): void {
    this.root.classList.add('pending');
  }

  render(): void {
    this.root.classList.remove('pending');
    this.root.replaceChildren();
    const view = this.view;
    if (!view) return;

    const header = el('div', 'panel-header');
    header.append(
      el('span', `strategy-badge strategy-${view.strategy}`, view.strategy),
      el('span', 'latency', formatMicros(view.lastActionMicros)),
    );
    if (view.lastActionHit !== null) {
      header.append(el('span',
        view.lastActionHit ? 'hit-indicator hit' : 'hit-indicator miss',
        view.lastActionHit ? 'cache hit' : 'cache miss'));
    }
    this.root.append(header);

    if (this.lastError) {
      const notice = el('div', 'error-notice');
      notice.append(el('span', 'error-message', this.lastError.message));
      const failed = this.lastError;
      if (failed.tag) {
        const retry = el('button', 'retry-button', 'Retry');
        retry.addEventListener('click', () => {
          this.lastError = null;
          this.sink(failed.op, failed.tag);
        });
        notice.append(retry);
      }
      this.root.append(notice);
    }

    const chips = el('div', 'active-chips');
    if (view.activeTags.length === 0) {
      chips.append(el('span', 'chips-empty', 'no active tags'));
    }
    for (const label of view.activeTags) {
      const chip = el('span', 'chip');
      chip.append(el('span', 'chip-label', label));
      const remove = el('button', 'chip-remove', '×');
      remove.setAttribute('aria-label', `remove ${label}`);
      remove.addEventListener('click', () => this.onChipRemove(label));
      chip.append(remove);
      chips.append(chip);
    }
    this.root.append(chips);

    const body = el('div', 'panel-body');

    const tagPanel = el('div', 'tag-panel');
    tagPanel.append(el('h3', undefined, 'Selectable tags'));
    if (view.selectableTags.length === 0) {
      tagPanel.append(el('p', 'tags-empty',
        'No tag can narrow this set further. Remove a tag to widen it.'));
    } else {
      const list = el('ul', 'tag-list');
      for (const { label, count } of view.selectableTags) {
        const item = el('li', 'tag-item');
        const button = el('button', 'tag-button');
        button.append(
          el('span', 'tag-label', label),
          el('span', 'tag-count', String(count)),
        );
        button.addEventListener('click', () => this.onTagClick(label));
        item.append(button);
        list.append(item);
      }
      tagPanel.append(list);
    }
    body.append(tagPanel);

    const resourcePanel = el('div', 'resource-panel');
    resourcePanel.append(
      el('h3', undefined, `Resources (${view.totalResources})`),
    );
    const grid = el('div', 'resource-grid');
    for (const resource of view.resources) {
      const card = el('div', 'resource-card');
      card.append(el('div', 'resource-label', resource.label || resource.id));
      card.append(el('div', 'resource-id', resource.id));
      if (resource.uri) {
        const link = el('a', 'resource-uri', resource.uri);
        link.setAttribute('href', resource.uri);
        card.append(link);
      }
      grid.append(card);
    }
    resourcePanel.append(grid);

    if (view.totalPages > 1) {
      const pager = el('div', 'pager');
      const prev = el('button', 'pager-prev', 'prev');
      prev.disabled = view.page <= 1;
      prev.addEventListener('click', () => void this.setPage(view.page - 1));
      const next = el('button', 'pager-next', 'next');
      next.disabled = view.page >= view.totalPages;
      next.addEventListener('click', () => void this.setPage(view.page + 1));
      pager.append(prev,
        el('span', 'pager-label', `page ${view.page} / ${view.totalPages}`),
        next);
      resourcePanel.append(pager);
    }
    body.append(resourcePanel);
    this.root.append(body);

    const stats = view.cacheStats;
    this.root.append(el('div', 'cache-stats',
      `lookups ${stats.lookups} · hits ${stats.hits} · ` +
      `stores ${stats.stores} · entries ${stats.entries}`));
  }
}
