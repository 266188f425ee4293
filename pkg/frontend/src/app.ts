// Application shell: token entry, persistent day sidebar, the timeline with
// judgment controls and keyboard shortcuts, and the review board. All state
// shown is reconstructable from acknowledged API responses.

import { ApiClient, type LabelChoice, type ThreadDoc } from "./api.js";
import { renderConversation, renderUnavailable } from "./conversation.js";
import { renderReview } from "./review.js";
import { openStoryDialog } from "./storyDialog.js";
import { applyJudgmentToCard, renderCard, showCardError } from "./timeline.js";

interface AppState {
  api: ApiClient;
  selectedDate: string | null;
  unannotatedOnly: boolean;
  view: "timeline" | "review";
  selectedCard: number;
  threadCache: Map<string, ThreadDoc | "unavailable">;
}

export function startApp(root: HTMLElement, baseUrl = ""): void {
  root.textContent = "";
  const form = document.createElement("form");
  form.className = "token-form";
  const label = document.createElement("label");
  label.textContent = "Annotator token: ";
  const input = document.createElement("input");
  input.className = "token-input";
  input.type = "text";
  input.required = true;
  const go = document.createElement("button");
  go.type = "submit";
  go.textContent = "Start session";
  label.append(input);
  form.append(label, go);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (input.value.trim()) void runApp(root, baseUrl, input.value.trim());
  });
  root.append(form);
}

export async function runApp(root: HTMLElement, baseUrl: string, token: string): Promise<AppController> {
  const state: AppState = {
    api: new ApiClient(baseUrl, token),
    selectedDate: null,
    unannotatedOnly: false,
    view: "timeline",
    selectedCard: 0,
    threadCache: new Map(),
  };

  root.textContent = "";
  const sidebar = document.createElement("nav");
  sidebar.className = "day-sidebar";
  const main = document.createElement("main");
  main.className = "main-pane";
  root.append(sidebar, main);

  const controller = new AppController(state, sidebar, main);
  await controller.refreshDays();
  controller.bindKeyboard(root.ownerDocument);
  return controller;
}

export class AppController {
  constructor(
    private readonly state: AppState,
    private readonly sidebar: HTMLElement,
    private readonly main: HTMLElement,
  ) {}

  async refreshDays(): Promise<void> {
    const days = await this.state.api.getDays();
    this.sidebar.textContent = "";

    const tabs = document.createElement("div");
    tabs.className = "view-tabs";
    const timelineTab = document.createElement("button");
    timelineTab.className = "tab-timeline";
    timelineTab.textContent = "Timeline";
    timelineTab.addEventListener("click", () => {
      this.state.view = "timeline";
      void this.renderTimeline();
    });
    const reviewTab = document.createElement("button");
    reviewTab.className = "tab-review";
    reviewTab.textContent = "Review";
    reviewTab.addEventListener("click", () => {
      this.state.view = "review";
      void this.renderReviewBoard();
    });
    tabs.append(timelineTab, reviewTab);
    this.sidebar.append(tabs);

    const filter = document.createElement("label");
    filter.className = "unannotated-filter";
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = this.state.unannotatedOnly;
    box.addEventListener("change", () => {
      this.state.unannotatedOnly = box.checked;
      void this.renderTimeline();
    });
    filter.append(box, document.createTextNode(" unannotated only"));
    this.sidebar.append(filter);

    const list = document.createElement("ul");
    list.className = "day-list";
    for (const day of days) {
      const item = document.createElement("li");
      const pick = document.createElement("button");
      pick.className = "day-link";
      pick.dataset.date = day.date;
      pick.textContent = `${day.date} (${day.annotated}/${day.threads})`;
      pick.addEventListener("click", () => {
        this.state.selectedDate = day.date;
        this.state.view = "timeline";
        void this.renderTimeline();
      });
      item.append(pick);
      list.append(item);
    }
    this.sidebar.append(list);

    if (!this.state.selectedDate && days.length) this.state.selectedDate = days[0].date;
    if (this.state.view === "timeline") await this.renderTimeline();
    else await this.renderReviewBoard();
  }

  async renderTimeline(): Promise<void> {
    const date = this.state.selectedDate;
    this.main.textContent = "";
    if (!date) {
      this.main.textContent = "no days loaded";
      return;
    }
    const timeline = await this.state.api.getTimeline(date);
    const container = document.createElement("div");
    container.className = "timeline";
    container.dataset.date = date;
    const summaries = timeline.threads.filter(
      (t) => !this.state.unannotatedOnly || t.label === "unannotated",
    );
    for (const summary of summaries) {
      container.append(
        renderCard(summary, {
          onChoice: (id, choice, card) => void this.annotate(id, choice, card),
          onToggle: (id, card) => void this.toggleConversation(id, card),
        }),
      );
    }
    this.main.append(container);
    this.highlightSelected();
  }

  /** tick opens the story dialog first; the card only changes on server ack */
  async annotate(threadId: string, choice: LabelChoice, card: HTMLElement): Promise<void> {
    let story: string | undefined;
    if (choice === "rumour") {
      const stories = await this.state.api.getStories();
      const picked = await openStoryDialog(stories, card.ownerDocument.body);
      if (picked === null) return; // dialog cancelled: nothing is sent
      story = picked;
    }
    try {
      const response = await this.state.api.postJudgment(threadId, choice, story);
      applyJudgmentToCard(card, response.judgment.label, response.story?.name ?? null);
    } catch (error) {
      showCardError(card, String((error as Error).message ?? error), () =>
        void this.annotate(threadId, choice, card),
      );
    }
  }

  async toggleConversation(threadId: string, card: HTMLElement): Promise<void> {
    const slot = card.querySelector<HTMLElement>(".conversation-slot");
    if (!slot) return;
    if (!slot.hidden) {
      slot.hidden = true;
      return;
    }
    let doc = this.state.threadCache.get(threadId);
    if (doc === undefined) {
      try {
        doc = await this.state.api.getThread(threadId);
      } catch {
        doc = "unavailable";
      }
      this.state.threadCache.set(threadId, doc);
    }
    slot.textContent = "";
    slot.append(doc === "unavailable" ? renderUnavailable() : renderConversation(doc));
    slot.hidden = false;
  }

  async renderReviewBoard(): Promise<void> {
    const review = await this.state.api.getReview();
    this.main.textContent = "";
    this.main.append(
      renderReview(review, {
        onRename: async (storyId, name) => {
          await this.state.api.renameStory(storyId, name);
        },
        onMove: async (threadId, storyId) => {
          await this.state.api.moveThread(threadId, storyId);
        },
        refresh: () => void this.renderReviewBoard(),
      }),
    );
  }

  // keyboard shortcuts drive the same handlers as mouse clicks
  bindKeyboard(doc: Document): void {
    doc.addEventListener("keydown", (event) => {
      if (this.state.view !== "timeline") return;
      const target = event.target as HTMLElement | null;
      if (target && (target.tagName === "INPUT" || target.tagName === "TEXTAREA")) return;
      const cards = [...this.main.querySelectorAll<HTMLElement>(".card")];
      if (!cards.length) return;
      const key = event.key.toLowerCase();
      if (key === "j") {
        this.state.selectedCard = Math.min(this.state.selectedCard + 1, cards.length - 1);
        this.highlightSelected();
      } else if (key === "k") {
        this.state.selectedCard = Math.max(this.state.selectedCard - 1, 0);
        this.highlightSelected();
      } else {
        const card = cards[this.state.selectedCard];
        if (!card) return;
        const id = card.dataset.id ?? "";
        if (key === "t") void this.annotate(id, "rumour", card);
        else if (key === "x") void this.annotate(id, "nonrumour", card);
        else if (key === "u") void this.annotate(id, "unsure", card);
        else if (key === "c") void this.toggleConversation(id, card);
      }
    });
  }

  private highlightSelected(): void {
    const cards = [...this.main.querySelectorAll<HTMLElement>(".card")];
    cards.forEach((card, index) => card.classList.toggle("selected", index === this.state.selectedCard));
  }
}

const mount = typeof document !== "undefined" ? document.getElementById("app") : null;
if (mount) startApp(mount);
