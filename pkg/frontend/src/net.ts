/** Reconnecting websocket. Parsed events are handed to a single callback;
 * the caller queues them into its render loop.
 */

import type { UiEvent } from "./state.js";
import type { OutgoingMsg, ServerMsg } from "./types.js";

const BACKOFF_START_MS = 500;
const BACKOFF_CAP_MS = 8000;

export class GuideSocket {
  private ws: WebSocket | null = null;
  private backoff = BACKOFF_START_MS;
  private closed = false;

  constructor(
    private readonly url: string,
    private readonly onEvent: (event: UiEvent) => void,
  ) {
    this.connect();
  }

  private connect(): void {
    if (this.closed) return;
    this.onEvent({ kind: "socket", status: "connecting", at: Date.now() });
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.backoff = BACKOFF_START_MS;
      this.onEvent({ kind: "socket", status: "open", at: Date.now() });
    };
    ws.onmessage = (raw: MessageEvent) => {
      let msg: ServerMsg;
      try {
        msg = JSON.parse(String(raw.data)) as ServerMsg;
      } catch {
        return; // a frame we cannot parse is dropped, not fatal
      }
      this.onEvent({ kind: "wire", msg, at: Date.now() });
    };
    ws.onclose = () => {
      this.ws = null;
      this.onEvent({ kind: "socket", status: "closed", at: Date.now() });
      if (!this.closed) {
        setTimeout(() => this.connect(), this.backoff);
        this.backoff = Math.min(this.backoff * 2, BACKOFF_CAP_MS);
      }
    };
    ws.onerror = () => ws.close();
  }

  send(msg: OutgoingMsg): void {
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(JSON.stringify(msg));
    }
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
  }
}
