// Test plumbing: a TCP line transport (node side of the protocol) and a
// child-process harness that boots the real engine server.

import { spawn, ChildProcess } from "node:child_process";
import net from "node:net";
import { LineTransport } from "../src/client.js";

export class TcpTransport implements LineTransport {
  private handlers: ((line: string) => void)[] = [];
  private buffer = "";

  private constructor(private socket: net.Socket) {
    socket.setEncoding("utf-8");
    socket.on("data", (chunk: string) => {
      this.buffer += chunk;
      let index;
      while ((index = this.buffer.indexOf("\n")) >= 0) {
        const line = this.buffer.slice(0, index);
        this.buffer = this.buffer.slice(index + 1);
        if (line.trim()) this.handlers.forEach((h) => h(line));
      }
    });
  }

  static connect(host: string, port: number): Promise<TcpTransport> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ host, port }, () =>
        resolve(new TcpTransport(socket)));
      socket.on("error", reject);
    });
  }

  send(line: string): void {
    this.socket.write(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.handlers.push(handler);
  }

  close(): void {
    this.socket.destroy();
  }
}

export interface EngineHandle {
  port: number;
  process: ChildProcess;
  stop(): void;
}

/** Start the engine on an ephemeral port; resolves once it reports the
 * bound address on stdout. */
export function startEngine(grid = "6x3"): Promise<EngineHandle> {
  const child = spawn("python3", ["-m", "volta.server", "--listen", "127.0.0.1:0",
                                  "--grid", grid],
                      { stdio: ["ignore", "pipe", "pipe"] });
  return new Promise((resolve, reject) => {
    let output = "";
    const timer = setTimeout(() => {
      child.kill();
      reject(new Error(`engine did not start: ${output}`));
    }, 15000);
    child.stdout!.setEncoding("utf-8");
    child.stdout!.on("data", (chunk: string) => {
      output += chunk;
      const match = output.match(/listening on 127\.0\.0\.1:(\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve({
          port: Number(match[1]),
          process: child,
          stop: () => child.kill(),
        });
      }
    });
    child.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`engine exited early (${code}): ${output}`));
    });
  });
}

export async function waitFor(predicate: () => boolean, timeoutMs = 5000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (predicate()) return;
    await new Promise((r) => setTimeout(r, 10));
  }
  throw new Error("condition not reached in time");
}
