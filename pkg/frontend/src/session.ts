/* WebSocket session client.
 *
 * One socket, one trial at a time, server authoritative. Inputs are
 * queued while the socket is still connecting and flushed in arrival
 * order once it opens; after the connection drops they are discarded
 * and surfaced as a warning instead, because a reconnected session is a
 * new trial and stale inputs must not leak into it.
 *
 * The socket is injected as a factory so tests can drive the client
 * with a scripted stand-in or a Node WebSocket implementation.
 */

import type {
  ClientMessage, HelloReply, InputPayload, ServerMessage, StateDiff,
  TrialDone, TrialRequest, TrialSetup,
} from "./protocol.js";
import { decodeServerMessage, encodeClientMessage, ProtocolError }
  from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

/* Structural subset of the browser WebSocket; the ws package satisfies
 * it too, which is what the integration tests use. */
export interface WireSocket {
  send(data: string): void;
  close(): void;
  addEventListener(type: "open", fn: () => void): void;
  addEventListener(type: "close", fn: () => void): void;
  addEventListener(type: "message", fn: (ev: { data: unknown }) => void): void;
}

export interface SessionHandlers {
  onStatus?(status: ConnectionStatus): void;
  onHello?(msg: HelloReply): void;
  onDiff?(diff: StateDiff): void;
  onDone?(msg: TrialDone): void;
  onServerError?(message: string): void;
  /** Local problems: dropped inputs, undecodable frames. */
  onWarning?(message: string): void;
}

export class SessionClient {
  status: ConnectionStatus = "connecting";
  setup: TrialSetup | null = null;
  lastDiff: StateDiff | null = null;

  private readonly socket: WireSocket;
  private readonly handlers: SessionHandlers;
  private readonly outbox: ClientMessage[] = [];

  constructor(connect: () => WireSocket, handlers: SessionHandlers = {}) {
    this.handlers = handlers;
    this.socket = connect();
    this.socket.addEventListener("open", () => {
      this.status = "open";
      for (const msg of this.outbox.splice(0)) {
        this.socket.send(encodeClientMessage(msg));
      }
      this.handlers.onStatus?.(this.status);
    });
    this.socket.addEventListener("close", () => {
      this.status = "closed";
      this.handlers.onStatus?.(this.status);
    });
    this.socket.addEventListener("message", (ev) => {
      this.receive(typeof ev.data === "string" ? ev.data : String(ev.data));
    });
  }

  hello(): void {
    this.post({ k: "hello" });
  }

  startTrial(req: TrialRequest = {}): void {
    this.setup = null;
    this.lastDiff = null;
    this.post({ k: "start_trial", ...req });
  }

  /** Forward one input; returns false when it had to be dropped. */
  sendInput(p: InputPayload): boolean {
    if (this.status === "closed") {
      this.handlers.onWarning?.(`connection lost, ${p.kind} input dropped`);
      return false;
    }
    this.post({ k: "input", ...p });
    return true;
  }

  close(): void {
    this.socket.close();
  }

  private post(msg: ClientMessage): void {
    if (this.status === "connecting") {
      this.outbox.push(msg);
      return;
    }
    if (this.status === "closed") {
      this.handlers.onWarning?.("connection lost, message dropped");
      return;
    }
    this.socket.send(encodeClientMessage(msg));
  }

  private receive(raw: string): void {
    let msg: ServerMessage;
    try {
      msg = decodeServerMessage(raw);
    } catch (err) {
      if (err instanceof ProtocolError) {
        this.handlers.onWarning?.(err.message);
        return;
      }
      throw err;
    }
    switch (msg.k) {
      case "hello":
        this.handlers.onHello?.(msg);
        break;
      case "state_diff":
        if (msg.setup) this.setup = msg.setup;
        this.lastDiff = msg;
        this.handlers.onDiff?.(msg);
        break;
      case "trial_done":
        this.handlers.onDone?.(msg);
        break;
      case "error":
        this.handlers.onServerError?.(msg.message);
        break;
    }
  }
}
