import type { PredictRequestBody, PredictResponseBody } from "./types";

export type FetchLike = (url: string, init: RequestInit) => Promise<Response>;

export interface PredictClientOptions {
  baseUrl?: string;
  fetchFn?: FetchLike;
  debounceMs?: number;
  onResult: (body: PredictResponseBody) => void;
  onError: (message: string) => void;
}

/**
 * Debounced /predict client for one draft slot.
 *
 * schedule() resets a trailing debounce timer, so a burst of edits issues a
 * single request once the burst has been idle for debounceMs. Every request
 * carries a sequence number; a response is applied only if no later response
 * has been applied already, so out-of-order arrivals can never roll the view
 * backwards.
 */
export class PredictClient {
  private baseUrl: string;
  private fetchFn: FetchLike;
  private debounceMs: number;
  private onResult: (body: PredictResponseBody) => void;
  private onError: (message: string) => void;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private issued = 0;
  private applied = 0;

  constructor(options: PredictClientOptions) {
    this.baseUrl = (options.baseUrl ?? "").replace(/\/$/, "");
    this.fetchFn = options.fetchFn ?? ((url, init) => fetch(url, init));
    this.debounceMs = options.debounceMs ?? 300;
    this.onResult = options.onResult;
    this.onError = options.onError;
  }

  /** Queue a request for this body, collapsing edits inside the debounce window. */
  schedule(body: PredictRequestBody): void {
    this.cancel();
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.send(body);
    }, this.debounceMs);
  }

  /** Drop any pending request. Invalid drafts call this so nothing is sent. */
  cancel(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  /** True while a debounce timer is armed. */
  pending(): boolean {
    return this.timer !== null;
  }

  private async send(body: PredictRequestBody): Promise<void> {
    const seq = ++this.issued;
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}/predict`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      });
    } catch {
      if (seq > this.applied) {
        this.applied = seq;
        this.onError("prediction service unreachable");
      }
      return;
    }
    if (!response.ok) {
      let message = `service error (${response.status})`;
      try {
        const payload = (await response.json()) as { error?: string };
        if (payload.error) message = payload.error;
      } catch {
        // keep the status-only message
      }
      if (seq <= this.applied) return; // a newer response already landed
      this.applied = seq;
      this.onError(message);
      return;
    }
    const result = (await response.json()) as PredictResponseBody;
    if (seq <= this.applied) return;
    this.applied = seq;
    this.onResult(result);
  }
}
