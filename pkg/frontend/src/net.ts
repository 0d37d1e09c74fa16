/** Gateway connection with automatic reconnect. */

import { parseServerMessage, type OperatorInput, type ServerMessage } from "./protocol.js";

export type ConnState = "connecting" | "open" | "closed";

export class GatewayClient {
  private ws: WebSocket | null = null;
  private retryMs = 500;
  state: ConnState = "connecting";

  constructor(
    readonly url: string,
    private onMessage: (msg: ServerMessage) => void,
    private onState: (state: ConnState) => void = () => {},
  ) {
    this.connect();
  }

  private connect(): void {
    this.state = "connecting";
    this.onState(this.state);
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.retryMs = 500;
      this.state = "open";
      this.onState(this.state);
    };
    ws.onmessage = (ev: MessageEvent) => {
      try {
        this.onMessage(parseServerMessage(String(ev.data)));
      } catch (err) {
        console.warn("bad server message:", err);
      }
    };
    ws.onclose = () => {
      this.state = "closed";
      this.onState(this.state);
      setTimeout(() => this.connect(), this.retryMs);
      this.retryMs = Math.min(this.retryMs * 2, 5000);
    };
    ws.onerror = () => ws.close();
  }

  /** Send an input; returns false (caller shows a banner) when offline. */
  send(input: OperatorInput): boolean {
    if (!this.ws || this.ws.readyState !== WebSocket.OPEN) return false;
    this.ws.send(JSON.stringify(input));
    return true;
  }
}

/** Gateway address from ?ws=..., falling back to the page host. */
export function gatewayUrl(search: string, host: string): string {
  const params = new URLSearchParams(search);
  const explicit = params.get("ws");
  if (explicit) return explicit;
  return `ws://${host || "127.0.0.1"}:8765`;
}
