import { describe, expect, it } from "vitest";

import { isEditableTarget, keyAction } from "../src/keyboard.js";

describe("keyAction", () => {
  it("maps digit keys to zero-based classes", () => {
    expect(keyAction("1", 4)).toEqual({ type: "label", cls: 0 });
    expect(keyAction("4", 4)).toEqual({ type: "label", cls: 3 });
  });

  it("ignores digits beyond the palette", () => {
    expect(keyAction("5", 4)).toBeNull();
    expect(keyAction("9", 2)).toBeNull();
    expect(keyAction("0", 4)).toBeNull();
  });

  it("maps navigation and submit keys", () => {
    expect(keyAction("ArrowRight", 3)).toEqual({ type: "next" });
    expect(keyAction("j", 3)).toEqual({ type: "next" });
    expect(keyAction("ArrowLeft", 3)).toEqual({ type: "prev" });
    expect(keyAction("k", 3)).toEqual({ type: "prev" });
    expect(keyAction("Enter", 3)).toEqual({ type: "submit" });
  });

  it("passes through unrelated keys", () => {
    expect(keyAction("a", 3)).toBeNull();
    expect(keyAction("Escape", 3)).toBeNull();
    expect(keyAction(" ", 3)).toBeNull();
  });
});

describe("isEditableTarget", () => {
  it("treats text-entry elements as editable", () => {
    expect(isEditableTarget({ tagName: "INPUT" })).toBe(true);
    expect(isEditableTarget({ tagName: "TEXTAREA" })).toBe(true);
    expect(isEditableTarget({ tagName: "SELECT" })).toBe(true);
    expect(isEditableTarget({ tagName: "DIV", isContentEditable: true })).toBe(
      true,
    );
  });

  it("lets everything else receive shortcuts", () => {
    expect(isEditableTarget({ tagName: "DIV" })).toBe(false);
    expect(isEditableTarget({ tagName: "BUTTON" })).toBe(false);
    expect(isEditableTarget(null)).toBe(false);
    expect(isEditableTarget(undefined)).toBe(false);
  });
});
