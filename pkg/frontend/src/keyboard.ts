/**
 * Keyboard-first labeling: digit keys assign classes to the focused
 * card, arrows or vim keys move focus, Enter submits a finished batch.
 * Mapping is pure so it can be tested without a DOM.
 */

export type KeyAction =
  | { type: "label"; cls: number }
  | { type: "next" }
  | { type: "prev" }
  | { type: "submit" };

export function keyAction(key: string, nClasses: number): KeyAction | null {
  if (key.length === 1 && key >= "1" && key <= "9") {
    const cls = key.charCodeAt(0) - "1".charCodeAt(0);
    return cls < nClasses ? { type: "label", cls } : null;
  }
  switch (key) {
    case "ArrowRight":
    case "ArrowDown":
    case "j":
      return { type: "next" };
    case "ArrowLeft":
    case "ArrowUp":
    case "k":
      return { type: "prev" };
    case "Enter":
      return { type: "submit" };
    default:
      return null;
  }
}

const EDITABLE_TAGS = new Set(["INPUT", "TEXTAREA", "SELECT"]);

/** True when the event target is a text-entry element whose keystrokes
    must not be stolen by the labeling shortcuts. */
export function isEditableTarget(target: unknown): boolean {
  if (!target || typeof target !== "object") return false;
  const t = target as { tagName?: unknown; isContentEditable?: unknown };
  if (t.isContentEditable === true) return true;
  return typeof t.tagName === "string" && EDITABLE_TAGS.has(t.tagName);
}
