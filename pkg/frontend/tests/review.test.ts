import { describe, expect, it, vi } from "vitest";

import type { ReviewData } from "../src/api.js";
import { renderReview } from "../src/review.js";

function reviewData(): ReviewData {
  const summary = (id: string, text: string, story: string) => ({
    id,
    text,
    author: "a",
    created_at: "2014-08-09T09:00:00.000Z",
    retweet_count: 100,
    reply_count: 0,
    label: "rumour",
    story,
  });
  return {
    schema_version: 1,
    stories: [
      {
        story: { story_id: "s1", name: "first story", created_at: 0 },
        threads: [summary("t1", "thread one", "first story")],
        empty: false,
      },
      {
        story: { story_id: "s2", name: "second story", created_at: 0 },
        threads: [summary("t2", "thread two", "second story")],
        empty: false,
      },
    ],
    counts: { rumours: 2, non_rumours: 0, unsure: 0, unannotated: 1 },
  };
}

describe("review board", () => {
  it("renders counts and one column per story", () => {
    const board = renderReview(reviewData(), {
      onRename: async () => {},
      onMove: async () => {},
      refresh: () => {},
    });
    expect(board.querySelector(".review-counts")?.textContent).toContain("2 rumours");
    expect(board.querySelectorAll(".story-column")).toHaveLength(2);
    expect(board.querySelectorAll(".member-card")).toHaveLength(2);
  });

  it("move applies optimistically then refreshes from the server", async () => {
    const onMove = vi.fn().mockResolvedValue(undefined);
    const refresh = vi.fn();
    const board = renderReview(reviewData(), { onRename: async () => {}, onMove, refresh });
    const select = board.querySelector<HTMLSelectElement>('.member-card[data-id="t1"] .move-select')!;
    select.value = "s2";
    select.dispatchEvent(new Event("change"));
    // optimistic: the card is already in the target column before the server replies
    const target = board.querySelector('[data-story-id="s2"] .story-members')!;
    expect(target.querySelector('[data-id="t1"]')).not.toBeNull();
    expect(onMove).toHaveBeenCalledWith("t1", "s2");
    await Promise.resolve();
    expect(refresh).toHaveBeenCalled();
  });

  it("a failed move still triggers a refresh (rollback to server state)", async () => {
    const onMove = vi.fn().mockRejectedValue(new Error("422"));
    const refresh = vi.fn();
    const board = renderReview(reviewData(), { onRename: async () => {}, onMove, refresh });
    const select = board.querySelector<HTMLSelectElement>('.member-card[data-id="t1"] .move-select')!;
    select.value = "s2";
    select.dispatchEvent(new Event("change"));
    await Promise.resolve();
    await Promise.resolve();
    expect(refresh).toHaveBeenCalled();
  });

  it("inline rename sends the new name", async () => {
    const onRename = vi.fn().mockResolvedValue(undefined);
    const refresh = vi.fn();
    const board = renderReview(reviewData(), { onRename, onMove: async () => {}, refresh });
    const column = board.querySelector('[data-story-id="s1"]')!;
    column.querySelector<HTMLButtonElement>(".rename")!.click();
    const input = column.querySelector<HTMLInputElement>(".rename-input")!;
    input.value = "renamed story";
    column.querySelector<HTMLButtonElement>(".rename-save")!.click();
    await Promise.resolve();
    expect(onRename).toHaveBeenCalledWith("s1", "renamed story");
  });
});
