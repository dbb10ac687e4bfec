/**
 * Client-side session state machine.
 *
 * The store mirrors the service: the pending items are exactly the ids
 * of the current query, a submission sends exactly those ids back, and
 * after a submit it polls the session until the iteration advances
 * before fetching the next query. Nothing survives a reload except the
 * in-progress choices, which go through the injected draft storage
 * keyed by the service's config hash.
 */

import { ApiClient, ApiError } from "./api.js";
import type {
  ClassInfo,
  HistoryEntry,
  PendingItem,
  SessionView,
} from "./types.js";

export type Phase =
  | "loading"
  | "labeling"
  | "submitting"
  | "done"
  | "stale"
  | "error";

export interface DraftStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export interface StoreOptions {
  storage?: DraftStorage | null;
  pollIntervalMs?: number;
  pollLimit?: number;
  sleep?: (ms: number) => Promise<void>;
}

interface Draft {
  iteration: number;
  choices: [number, number][];
}

const DRAFT_PREFIX = "gbal.draft.";

function defaultSleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export class LabelingStore {
  phase: Phase = "loading";
  session: SessionView | null = null;
  palette: ClassInfo[] = [];
  pending: PendingItem[] = [];
  queryIteration = 0;
  focus = 0;
  error: string | null = null;
  configHash: string | null = null;

  private readonly api: ApiClient;
  private readonly storage: DraftStorage | null;
  private readonly pollIntervalMs: number;
  private readonly pollLimit: number;
  private readonly sleep: (ms: number) => Promise<void>;
  private readonly listeners = new Set<() => void>();
  private submitting = false;

  constructor(api: ApiClient, options: StoreOptions = {}) {
    this.api = api;
    this.storage = options.storage ?? null;
    this.pollIntervalMs = options.pollIntervalMs ?? 150;
    this.pollLimit = options.pollLimit ?? 200;
    this.sleep = options.sleep ?? defaultSleep;
  }

  subscribe(listener: () => void): () => void {
    this.listeners.add(listener);
    return () => {
      this.listeners.delete(listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  get iteration(): number {
    return this.session ? this.session.iteration : 0;
  }

  get history(): HistoryEntry[] {
    return this.session ? this.session.accuracy_history : [];
  }

  get finalAccuracy(): number | null {
    const history = this.history;
    for (let i = history.length - 1; i >= 0; i--) {
      const acc = history[i].accuracy;
      if (acc !== null) return acc;
    }
    return null;
  }

  get canSubmit(): boolean {
    return (
      this.phase === "labeling" &&
      this.pending.length > 0 &&
      this.pending.every((item) => item.choice !== null)
    );
  }

  async load(): Promise<void> {
    this.phase = "loading";
    this.error = null;
    this.emit();
    try {
      const session = await this.api.session();
      if (!this.adopt(session.config_hash)) return;
      this.session = session;
      const classList = await this.api.classes();
      if (!this.adopt(classList.config_hash)) return;
      this.palette = classList.classes;
      await this.loadQuery(new Map());
    } catch (err) {
      this.fail(err);
    }
  }

  choose(id: number, cls: number): void {
    if (this.phase !== "labeling") return;
    if (cls < 0 || cls >= this.palette.length) return;
    const index = this.pending.findIndex((item) => item.id === id);
    if (index === -1) return;
    this.pending[index].choice = cls;
    this.saveDraft();
    this.focus = this.nextUnchosen(index);
    this.emit();
  }

  labelFocused(cls: number): void {
    if (this.phase !== "labeling" || this.pending.length === 0) return;
    this.choose(this.pending[this.focus].id, cls);
  }

  focusCard(id: number): void {
    const index = this.pending.findIndex((item) => item.id === id);
    if (index !== -1) {
      this.focus = index;
      this.emit();
    }
  }

  focusNext(): void {
    if (this.phase !== "labeling" || this.pending.length === 0) return;
    this.focus = (this.focus + 1) % this.pending.length;
    this.emit();
  }

  focusPrev(): void {
    if (this.phase !== "labeling" || this.pending.length === 0) return;
    const n = this.pending.length;
    this.focus = (this.focus + n - 1) % n;
    this.emit();
  }

  async submit(): Promise<void> {
    if (!this.canSubmit || this.submitting) return;
    this.submitting = true;
    const iteration = this.queryIteration;
    const labels = this.pending.map((item) => ({
      id: item.id,
      class: item.choice as number,
    }));
    this.phase = "submitting";
    this.error = null;
    this.emit();
    try {
      const response = await this.api.submitLabels(iteration, labels);
      if (!this.adopt(response.config_hash)) return;
      this.clearDraft();
      let view: SessionView = await this.api.session();
      let polls = 0;
      while (view.iteration <= iteration && !view.done) {
        if (++polls > this.pollLimit) {
          throw new Error("session did not advance after label submission");
        }
        await this.sleep(this.pollIntervalMs);
        view = await this.api.session();
      }
      if (!this.adopt(view.config_hash)) return;
      this.session = view;
      await this.loadQuery(new Map());
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        await this.recover(err.message);
      } else if (err instanceof ApiError && err.status === 400) {
        this.phase = "labeling";
        this.error = err.message;
        this.emit();
      } else {
        this.fail(err);
      }
    } finally {
      this.submitting = false;
    }
  }

  /** Refetch session and query after a 409, keeping choices whose ids
      are still in the new query set. */
  private async recover(message: string): Promise<void> {
    try {
      const keep = new Map<number, number>();
      for (const item of this.pending) {
        if (item.choice !== null) keep.set(item.id, item.choice);
      }
      const session = await this.api.session();
      if (!this.adopt(session.config_hash)) return;
      this.session = session;
      this.error = message;
      await this.loadQuery(keep);
    } catch (err) {
      this.fail(err);
    }
  }

  private async loadQuery(keep: Map<number, number>): Promise<void> {
    const query = await this.api.query();
    if (!this.adopt(query.config_hash)) return;
    this.queryIteration = query.iteration;
    if (query.ids.length === 0) {
      this.pending = [];
      this.phase = "done";
      this.emit();
      return;
    }
    const preview = query.features_preview;
    this.pending = query.ids.map((id, i) => ({
      id,
      preview: i < preview.length ? preview[i] : [],
      choice: keep.get(id) ?? null,
    }));
    this.restoreDraft();
    const first = this.pending.findIndex((item) => item.choice === null);
    this.focus = first === -1 ? 0 : first;
    this.phase = "labeling";
    this.emit();
  }

  private nextUnchosen(from: number): number {
    const n = this.pending.length;
    for (let step = 1; step <= n; step++) {
      const index = (from + step) % n;
      if (this.pending[index].choice === null) return index;
    }
    return from;
  }

  private adopt(hash: string): boolean {
    if (this.configHash === null) {
      this.configHash = hash;
      return true;
    }
    if (hash !== this.configHash) {
      this.phase = "stale";
      this.emit();
      return false;
    }
    return true;
  }

  private fail(err: unknown): void {
    this.phase = "error";
    this.error = err instanceof Error ? err.message : String(err);
    this.emit();
  }

  private draftKey(): string {
    return `${DRAFT_PREFIX}${this.configHash ?? "unknown"}`;
  }

  private saveDraft(): void {
    if (!this.storage) return;
    const choices: [number, number][] = [];
    for (const item of this.pending) {
      if (item.choice !== null) choices.push([item.id, item.choice]);
    }
    const draft: Draft = { iteration: this.queryIteration, choices };
    try {
      this.storage.setItem(this.draftKey(), JSON.stringify(draft));
    } catch {
      // storage full or unavailable; drafts are best-effort
    }
  }

  private restoreDraft(): void {
    if (!this.storage) return;
    let raw: string | null = null;
    try {
      raw = this.storage.getItem(this.draftKey());
    } catch {
      return;
    }
    if (!raw) return;
    try {
      const draft = JSON.parse(raw) as Draft;
      if (draft.iteration !== this.queryIteration) return;
      const byId = new Map(draft.choices);
      for (const item of this.pending) {
        if (item.choice !== null) continue;
        const cls = byId.get(item.id);
        if (cls !== undefined && cls >= 0 && cls < this.palette.length) {
          item.choice = cls;
        }
      }
    } catch {
      // corrupt draft; ignore
    }
  }

  private clearDraft(): void {
    if (!this.storage) return;
    try {
      this.storage.removeItem(this.draftKey());
    } catch {
      // ignore
    }
  }
}
