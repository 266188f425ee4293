// Nested conversation rendering: indentation tracks reply depth, sibling
// order is exactly the order the API served.

import type { RecordDoc, ThreadDoc, ThreadNodeDoc } from "./api.js";

function nodeElement(record: RecordDoc, depth: number): HTMLElement {
  const el = document.createElement("div");
  el.className = depth === 0 ? "conv-node conv-source" : "conv-node";
  el.dataset.depth = String(depth);
  el.style.marginLeft = `${depth * 20}px`;

  const author = document.createElement("span");
  author.className = "conv-author";
  author.textContent = `@${record.author}`;
  const text = document.createElement("span");
  text.className = "conv-text";
  text.textContent = record.text;
  const when = document.createElement("time");
  when.className = "conv-time";
  when.textContent = record.created_at;
  el.append(author, text, when);
  return el;
}

export function renderConversation(doc: ThreadDoc): HTMLElement {
  const root = document.createElement("div");
  root.className = "conversation";
  root.append(nodeElement(doc.source, 0));

  const children = new Map<string, ThreadNodeDoc[]>();
  for (const node of doc.nodes) {
    const siblings = children.get(node.parent);
    if (siblings) siblings.push(node);
    else children.set(node.parent, [node]);
  }
  const walk = (parentId: string) => {
    for (const node of children.get(parentId) ?? []) {
      root.append(nodeElement(node.record, node.depth));
      walk(node.record.id);
    }
  };
  walk(doc.source.id);
  return root;
}

export function renderUnavailable(): HTMLElement {
  const el = document.createElement("div");
  el.className = "conversation conv-unavailable";
  el.textContent = "thread unavailable";
  return el;
}
