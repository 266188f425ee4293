// Typed client for the annotation service. The annotator token rides along
// as a header on every request; errors surface the server's machine codes.

export type LabelChoice = "rumour" | "nonrumour" | "unsure";

export interface DayInfo {
  date: string;
  threads: number;
  annotated: number;
}

export interface ThreadSummary {
  id: string;
  text: string;
  author: string;
  created_at: string;
  retweet_count: number;
  reply_count: number;
  label: string;
  story: string | null;
}

export interface RecordDoc {
  id: string;
  author: string;
  text: string;
  created_at: string;
  retweet_count: number;
  lang: string;
  in_reply_to?: string;
  retweet_of?: string;
}

export interface ThreadNodeDoc {
  record: RecordDoc;
  depth: number;
  parent: string;
}

export interface ThreadDoc {
  format: string;
  version: number;
  source: RecordDoc;
  nodes: ThreadNodeDoc[];
  reply_count: number;
  max_depth: number;
}

export interface StoryDoc {
  story_id: string;
  name: string;
  created_at: number;
  members?: number;
}

export interface JudgmentDoc {
  thread_id: string;
  label: string;
  story_id: string | null;
  annotator: string;
  at: number;
  seq: number;
}

export interface JudgmentResponse {
  judgment: JudgmentDoc;
  story: StoryDoc | null;
}

export interface ReviewGroup {
  story: StoryDoc;
  threads: ThreadSummary[];
  empty: boolean;
}

export interface ReviewData {
  schema_version: number;
  stories: ReviewGroup[];
  counts: { rumours: number; non_rumours: number; unsure: number; unannotated: number };
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly token: string,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "X-Annotator-Token": this.token };
    if (body !== undefined) headers["Content-Type"] = "application/json";
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = "http_error";
      let message = `HTTP ${response.status}`;
      try {
        const payload = await response.json();
        code = payload?.error?.code ?? code;
        message = payload?.error?.message ?? message;
      } catch {
        // non-JSON error body; keep the fallback code
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  getDays(): Promise<DayInfo[]> {
    return this.request("GET", "/api/days");
  }

  getTimeline(date: string): Promise<{ date: string; threads: ThreadSummary[] }> {
    return this.request("GET", `/api/days/${encodeURIComponent(date)}/threads`);
  }

  getThread(id: string): Promise<ThreadDoc> {
    return this.request("GET", `/api/threads/${encodeURIComponent(id)}`);
  }

  getStories(): Promise<StoryDoc[]> {
    return this.request("GET", "/api/stories");
  }

  getReview(): Promise<ReviewData> {
    return this.request("GET", "/api/review");
  }

  postJudgment(threadId: string, label: LabelChoice, story?: string): Promise<JudgmentResponse> {
    const body: Record<string, unknown> = { label };
    if (story !== undefined) body.story = story;
    return this.request("POST", `/api/threads/${encodeURIComponent(threadId)}/judgment`, body);
  }

  renameStory(storyId: string, name: string): Promise<{ story: StoryDoc }> {
    return this.request("POST", `/api/stories/${encodeURIComponent(storyId)}/rename`, { name });
  }

  moveThread(threadId: string, storyId: string): Promise<JudgmentResponse> {
    return this.request("POST", `/api/threads/${encodeURIComponent(threadId)}/move`, { story_id: storyId });
  }
}
