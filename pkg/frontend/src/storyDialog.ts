// Story picker shown after a tick: typeahead over existing stories plus
// free-text creation. Cancelling resolves null and nothing is sent.

import type { StoryDoc } from "./api.js";

export function openStoryDialog(stories: StoryDoc[], host: HTMLElement = document.body): Promise<string | null> {
  return new Promise((resolve) => {
    const overlay = document.createElement("div");
    overlay.className = "dialog-overlay";
    const dialog = document.createElement("div");
    dialog.className = "story-dialog";

    const title = document.createElement("h3");
    title.textContent = "Which story is this rumour part of?";
    const input = document.createElement("input");
    input.type = "text";
    input.className = "story-input";
    input.placeholder = "pick an existing story or type a new label";
    const list = document.createElement("ul");
    list.className = "story-suggestions";

    const done = (value: string | null) => {
      overlay.remove();
      resolve(value);
    };

    const refresh = () => {
      const needle = input.value.trim().toLowerCase();
      list.textContent = "";
      for (const story of stories) {
        if (needle && !story.name.toLowerCase().includes(needle)) continue;
        const item = document.createElement("li");
        const pick = document.createElement("button");
        pick.className = "story-option";
        pick.textContent = story.name;
        pick.addEventListener("click", () => done(story.name));
        item.append(pick);
        list.append(item);
      }
    };
    input.addEventListener("input", refresh);
    input.addEventListener("keydown", (event) => {
      if (event.key === "Enter" && input.value.trim()) done(input.value.trim());
      if (event.key === "Escape") done(null);
    });

    const actions = document.createElement("div");
    actions.className = "dialog-actions";
    const confirm = document.createElement("button");
    confirm.className = "confirm";
    confirm.textContent = "Assign story";
    confirm.addEventListener("click", () => {
      if (input.value.trim()) done(input.value.trim());
    });
    const cancel = document.createElement("button");
    cancel.className = "cancel";
    cancel.textContent = "Cancel";
    cancel.addEventListener("click", () => done(null));
    actions.append(confirm, cancel);

    dialog.append(title, input, list, actions);
    overlay.append(dialog);
    host.append(overlay);
    refresh();
    input.focus();
  });
}
