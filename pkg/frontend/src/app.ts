import { ApiClient } from './api';
import { SessionPanel } from './panel';
import type { ActionOp } from './types';

const STRATEGIES = ['none', 'query', 'resource'] as const;

function option(value: string, label?: string): HTMLOptionElement {
  const node = document.createElement('option');
  node.value = value;
  node.textContent = label ?? value;
  return node;
}

/**
 * Application shell: collection/strategy pickers, a single-session mode,
 * and a race mode that mirrors every click into two sessions running
 * different strategies so their latencies can be compared live.
 */
export class App {
  readonly root: HTMLElement;
  panels: SessionPanel[] = [];

  private client: ApiClient;
  private collectionSelect = document.createElement('select');
  private strategySelect = document.createElement('select');
  private raceToggle = document.createElement('input');
  private raceStrategySelect = document.createElement('select');
  private panelHost = document.createElement('div');
  private status = document.createElement('div');

  constructor(root: HTMLElement, client: ApiClient) {
    this.root = root;
    this.client = client;
  }

  async init(): Promise<void> {
    const form = document.createElement('form');
    form.className = 'setup';

    this.collectionSelect.className = 'collection-select';
    for (const strategy of STRATEGIES) {
      this.strategySelect.append(option(strategy));
      this.raceStrategySelect.append(option(strategy));
    }
    this.strategySelect.className = 'strategy-select';
    this.strategySelect.value = 'resource';
    this.raceStrategySelect.className = 'race-strategy-select';
    this.raceStrategySelect.value = 'query';

    this.raceToggle.type = 'checkbox';
    this.raceToggle.className = 'race-toggle';

    const start = document.createElement('button');
    start.type = 'submit';
    start.className = 'start-button';
    start.textContent = 'Start session';

    const raceLabel = document.createElement('label');
    raceLabel.append(this.raceToggle, document.createTextNode(' race against '));
    raceLabel.append(this.raceStrategySelect);

    form.append(this.collectionSelect, this.strategySelect, raceLabel, start);
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      void this.start();
    });

    this.panelHost.className = 'panels';
    this.status.className = 'status';
    this.root.replaceChildren(form, this.status, this.panelHost);

    try {
      const { collections } = await this.client.listCollections();
      this.collectionSelect.replaceChildren(
        ...collections.map((c) =>
          option(c.name, `${c.name} (${c.resources} resources, ${c.tags} tags)`)),
      );
      this.status.textContent = '';
    } catch (err) {
      this.status.textContent =
        `cannot reach service: ${err instanceof Error ? err.message : err}`;
    }
  }

  async start(): Promise<void> {
    const collection = this.collectionSelect.value;
    if (!collection) return;
    this.panelHost.replaceChildren();
    this.panels = [];

    const race = this.raceToggle.checked;
    const strategies = race
      ? [this.strategySelect.value, this.raceStrategySelect.value]
      : [this.strategySelect.value];

    // In race mode every click fans out to all panels; each panel still
    // serializes its own requests.
    const sink = (op: ActionOp, tag: string): void => {
      for (const panel of this.panels) void panel.dispatch(op, tag);
    };

    for (let i = 0; i < strategies.length; i += 1) {
      const host = document.createElement('div');
      this.panelHost.append(host);
      this.panels.push(new SessionPanel(host, this.client, race ? sink : undefined));
    }
    await Promise.all(
      strategies.map((strategy, i) => this.panels[i].start(collection, strategy)),
    );
  }
}

export function apiBaseUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get('api') ?? 'http://127.0.0.1:8000';
}
