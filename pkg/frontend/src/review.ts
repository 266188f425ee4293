// Review board: stories as columns of member cards, inline rename, and a
// select-based move control. Moves apply optimistically and roll back to
// server state on error, so the board never shows invented state for long.

import type { ReviewData, StoryDoc } from "./api.js";

export interface ReviewHandlers {
  onRename(storyId: string, name: string): Promise<void>;
  onMove(threadId: string, storyId: string): Promise<void>;
  refresh(): void;
}

function renameControl(story: StoryDoc, handlers: ReviewHandlers): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "story-header";
  const name = document.createElement("h3");
  name.className = "story-name";
  name.textContent = story.name;
  const edit = document.createElement("button");
  edit.className = "rename";
  edit.textContent = "rename";
  edit.addEventListener("click", () => {
    const input = document.createElement("input");
    input.className = "rename-input";
    input.value = story.name;
    const save = async () => {
      const next = input.value.trim();
      if (!next || next === story.name) {
        handlers.refresh();
        return;
      }
      try {
        await handlers.onRename(story.story_id, next);
      } finally {
        handlers.refresh();
      }
    };
    input.addEventListener("keydown", (event) => {
      if (event.key === "Enter") void save();
      if (event.key === "Escape") handlers.refresh();
    });
    const ok = document.createElement("button");
    ok.className = "rename-save";
    ok.textContent = "save";
    ok.addEventListener("click", () => void save());
    wrap.textContent = "";
    wrap.append(input, ok);
    input.focus();
  });
  wrap.append(name, edit);
  return wrap;
}

export function renderReview(data: ReviewData, handlers: ReviewHandlers): HTMLElement {
  const board = document.createElement("div");
  board.className = "review-board";

  const counts = document.createElement("div");
  counts.className = "review-counts";
  counts.textContent =
    `${data.counts.rumours} rumours / ${data.counts.non_rumours} non-rumours / ` +
    `${data.counts.unsure} unsure / ${data.counts.unannotated} unannotated`;
  board.append(counts);

  const columns = document.createElement("div");
  columns.className = "story-columns";
  for (const group of data.stories) {
    const column = document.createElement("section");
    column.className = group.empty ? "story-column story-empty" : "story-column";
    column.dataset.storyId = group.story.story_id;
    column.append(renameControl(group.story, handlers));

    const members = document.createElement("div");
    members.className = "story-members";
    for (const summary of group.threads) {
      const member = document.createElement("div");
      member.className = "member-card";
      member.dataset.id = summary.id;
      const text = document.createElement("span");
      text.textContent = summary.text;
      const mover = document.createElement("select");
      mover.className = "move-select";
      const placeholder = document.createElement("option");
      placeholder.value = "";
      placeholder.textContent = "move to…";
      mover.append(placeholder);
      for (const other of data.stories) {
        if (other.story.story_id === group.story.story_id) continue;
        const option = document.createElement("option");
        option.value = other.story.story_id;
        option.textContent = other.story.name;
        mover.append(option);
      }
      mover.addEventListener("change", () => {
        const target = mover.value;
        if (!target) return;
        const destination = columns.querySelector<HTMLElement>(
          `.story-column[data-story-id="${target}"] .story-members`,
        );
        destination?.append(member); // optimistic
        handlers.onMove(summary.id, target).then(
          () => handlers.refresh(),
          () => handlers.refresh(), // rollback: re-render from server state
        );
      });
      member.append(text, mover);
      members.append(member);
    }
    column.append(members);
    columns.append(column);
  }
  board.append(columns);
  return board;
}
