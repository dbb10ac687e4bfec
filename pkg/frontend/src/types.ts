/**
 * Wire types for the labeling service API plus the view model the
 * console renders from. Field names on the wire side mirror the JSON
 * the service emits, snake_case included.
 */

export interface HistoryEntry {
  iteration: number;
  n_labeled: number;
  accuracy: number | null;
  fit_seconds: number;
  select_seconds: number;
  method: string;
}

export interface SessionView {
  iteration: number;
  labeled_count: number;
  budget: number;
  done: boolean;
  accuracy_history: HistoryEntry[];
  config_hash: string;
}

export interface QueryView {
  iteration: number;
  ids: number[];
  done: boolean;
  features_preview: number[][];
  config_hash: string;
}

export interface ClassInfo {
  id: number;
  name: string;
}

export interface ClassList {
  classes: ClassInfo[];
  config_hash: string;
}

export interface PointDetail {
  id: number;
  features: number[] | null;
  labeled: boolean;
  class: number | null;
  image_url: string | null;
  config_hash: string;
}

export interface SubmitResponse extends SessionView {
  advanced: boolean;
}

export interface LabelChoice {
  id: number;
  class: number;
}

/** One card in the batch view: a queried point and the user's pick so far. */
export interface PendingItem {
  id: number;
  preview: number[];
  choice: number | null;
}
