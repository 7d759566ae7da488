// Session client: line transport in, typed events out, client-assigned
// monotonically increasing command ids echoed back in Ack/Error.

import { Command, ServerEvent, decodeEvent, encodeCommand } from "./protocol.js";

export interface LineTransport {
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  close(): void;
}

export class WebSocketTransport implements LineTransport {
  private socket: WebSocket;
  private handlers: ((line: string) => void)[] = [];
  private buffer = "";

  constructor(url: string) {
    this.socket = new WebSocket(url);
    this.socket.onmessage = (msg) => {
      this.buffer += String(msg.data);
      let index;
      while ((index = this.buffer.indexOf("\n")) >= 0) {
        const line = this.buffer.slice(0, index);
        this.buffer = this.buffer.slice(index + 1);
        if (line.trim()) this.handlers.forEach((h) => h(line));
      }
    };
  }

  ready(): Promise<void> {
    if (this.socket.readyState === WebSocket.OPEN) return Promise.resolve();
    return new Promise((resolve, reject) => {
      this.socket.onopen = () => resolve();
      this.socket.onerror = () => reject(new Error("websocket failed"));
    });
  }

  send(line: string): void {
    this.socket.send(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.handlers.push(handler);
  }

  close(): void {
    this.socket.close();
  }
}

type EventHandler = (event: ServerEvent) => void;

type DistributiveOmit<T, K extends PropertyKey> = T extends unknown ? Omit<T, K> : never;

/** A command without its id; the client assigns ids monotonically. */
export type CommandSpec = DistributiveOmit<Command, "id">;

export class SessionClient {
  private nextId = 1;
  private handlers: EventHandler[] = [];
  private pending = new Map<number, (event: ServerEvent) => void>();

  constructor(private transport: LineTransport) {
    transport.onLine((line) => this.handleLine(line));
  }

  onEvent(handler: EventHandler): void {
    this.handlers.push(handler);
  }

  private handleLine(line: string): void {
    const event = decodeEvent(line);
    this.handlers.forEach((h) => h(event));
    if (event.event === "Ack" || (event.event === "Error" && event.command_id !== null)) {
      const key = event.event === "Ack" ? event.command_id : event.command_id!;
      const resolve = this.pending.get(key);
      if (resolve) {
        this.pending.delete(key);
        resolve(event);
      }
    }
  }

  /** Send a command; resolves with its Ack or Error event. */
  send(command: CommandSpec): Promise<ServerEvent> {
    const id = this.nextId++;
    const full = { ...command, id } as Command;
    const line = encodeCommand(full); // schema gate: invalid commands never leave
    return new Promise((resolve) => {
      this.pending.set(id, resolve);
      this.transport.send(line);
    });
  }

  close(): void {
    this.transport.close();
  }
}
