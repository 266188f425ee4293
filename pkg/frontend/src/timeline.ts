// Thread cards: text, author, time, retweet count, judgment controls
// (tick = rumour, cross = non-rumour, question mark = unsure), a bubble to
// unfold the conversation, and the current judgment indicator. Indicators
// change only when a handler confirms the server accepted the mutation.

import type { LabelChoice, ThreadSummary } from "./api.js";

export interface CardHandlers {
  onChoice(threadId: string, choice: LabelChoice, card: HTMLElement): void;
  onToggle(threadId: string, card: HTMLElement): void;
}

const INDICATORS: Record<string, string> = {
  rumour: "✓",
  nonrumour: "✗",
  unsure: "?",
  unannotated: "·",
};

export function indicatorFor(label: string): string {
  return INDICATORS[label] ?? INDICATORS.unannotated;
}

export function renderCard(summary: ThreadSummary, handlers: CardHandlers): HTMLElement {
  const card = document.createElement("article");
  card.className = "card";
  card.dataset.id = summary.id;
  card.dataset.label = summary.label;
  card.tabIndex = 0;

  const header = document.createElement("header");
  const author = document.createElement("span");
  author.className = "card-author";
  author.textContent = `@${summary.author}`;
  const when = document.createElement("time");
  when.textContent = summary.created_at;
  const retweets = document.createElement("span");
  retweets.className = "card-retweets";
  retweets.textContent = `${summary.retweet_count} RT`;
  header.append(author, when, retweets);

  const text = document.createElement("p");
  text.className = "card-text";
  text.textContent = summary.text;

  const controls = document.createElement("div");
  controls.className = "card-controls";
  const buttons: Array<[LabelChoice, string, string]> = [
    ["rumour", "tick", "✓"],
    ["nonrumour", "cross", "✗"],
    ["unsure", "question", "?"],
  ];
  for (const [choice, cls, glyph] of buttons) {
    const button = document.createElement("button");
    button.className = `choice ${cls}`;
    button.title = choice;
    button.textContent = glyph;
    button.addEventListener("click", () => handlers.onChoice(summary.id, choice, card));
    controls.append(button);
  }
  const bubble = document.createElement("button");
  bubble.className = "bubble";
  bubble.title = "conversation";
  bubble.textContent = `\u{1f4ac} ${summary.reply_count}`;
  bubble.addEventListener("click", () => handlers.onToggle(summary.id, card));
  controls.append(bubble);

  const indicator = document.createElement("span");
  indicator.className = `indicator label-${summary.label}`;
  indicator.textContent = indicatorFor(summary.label);
  controls.append(indicator);

  const chip = document.createElement("span");
  chip.className = "story-chip";
  chip.hidden = summary.story === null;
  chip.textContent = summary.story ?? "";
  controls.append(chip);

  const error = document.createElement("div");
  error.className = "card-error";
  error.hidden = true;

  const slot = document.createElement("div");
  slot.className = "conversation-slot";
  slot.hidden = true;

  card.append(header, text, controls, error, slot);
  return card;
}

/** Reflect a server-acknowledged judgment on the card. */
export function applyJudgmentToCard(card: HTMLElement, label: string, storyName: string | null): void {
  card.dataset.label = label;
  const indicator = card.querySelector<HTMLElement>(".indicator");
  if (indicator) {
    indicator.className = `indicator label-${label}`;
    indicator.textContent = indicatorFor(label);
  }
  const chip = card.querySelector<HTMLElement>(".story-chip");
  if (chip) {
    chip.hidden = storyName === null;
    chip.textContent = storyName ?? "";
  }
  clearCardError(card);
}

/** Inline, non-blocking error with a retry hook; the card stays usable. */
export function showCardError(card: HTMLElement, message: string, retry: () => void): void {
  const error = card.querySelector<HTMLElement>(".card-error");
  if (!error) return;
  error.hidden = false;
  error.textContent = "";
  const label = document.createElement("span");
  label.textContent = message;
  const button = document.createElement("button");
  button.className = "retry";
  button.textContent = "retry";
  button.addEventListener("click", () => {
    clearCardError(card);
    retry();
  });
  error.append(label, button);
}

export function clearCardError(card: HTMLElement): void {
  const error = card.querySelector<HTMLElement>(".card-error");
  if (error) {
    error.hidden = true;
    error.textContent = "";
  }
}
