/**
 * Sequential client for any conforming policy endpoint, in this
 * language or the reference one. One request outstanding at a time;
 * the remote policy looks like a local infer() call.
 */

import { WebSocket } from "ws";

import { decode, encode, WireMap } from "./codec.js";
import { frameType, Metadata, obsFrame, parseMetadata, ProtocolViolation } from "./protocol.js";

export class ConnectFailed extends Error {}
export class MetadataMismatch extends Error {}
export class ServerInferenceError extends Error {}

export { ProtocolViolation };

export interface ServerTiming {
  inferMs: number;
  prevTotalMs: number;
}

export interface ClientOptions {
  /** Fail the handshake unless the server declares this action_dim. */
  expectActionDim?: number;
  timeoutMs?: number;
}

const DEFAULT_TIMEOUT_MS = 60_000;

/**
 * Incoming messages are queued from the moment the socket exists. The
 * server pushes metadata immediately on connect, and with a listener
 * attached late the frame can arrive before anyone is waiting for it;
 * the queue makes that ordering harmless.
 */
class Inbox {
  private queue: Array<Uint8Array | Error> = [];
  private waiter: { resolve: (m: Uint8Array) => void; reject: (e: Error) => void } | null = null;
  private timeoutMs: number;

  constructor(socket: WebSocket, timeoutMs: number) {
    this.timeoutMs = timeoutMs;
    socket.on("message", (raw: Buffer | ArrayBuffer | Buffer[], isBinary: boolean) => {
      if (!isBinary) {
        this.push(new ProtocolViolation("server sent a text frame"));
        return;
      }
      this.push(toBytes(raw));
    });
    socket.on("close", (code: number) => {
      this.push(new ServerInferenceError(`session closed with code ${code}`));
    });
    socket.on("error", (err: Error) => {
      this.push(new ConnectFailed(err.message));
    });
  }

  private push(item: Uint8Array | Error): void {
    if (this.waiter !== null) {
      const { resolve, reject } = this.waiter;
      this.waiter = null;
      if (item instanceof Error) reject(item);
      else resolve(item);
      return;
    }
    this.queue.push(item);
  }

  next(): Promise<Uint8Array> {
    const head = this.queue.shift();
    if (head !== undefined) {
      return head instanceof Error ? Promise.reject(head) : Promise.resolve(head);
    }
    return new Promise((resolve, reject) => {
      const timer = setTimeout(() => {
        this.waiter = null;
        reject(new ProtocolViolation(`no server frame within ${this.timeoutMs} ms`));
      }, this.timeoutMs);
      this.waiter = {
        resolve: (m) => {
          clearTimeout(timer);
          resolve(m);
        },
        reject: (e) => {
          clearTimeout(timer);
          reject(e);
        },
      };
    });
  }
}

export class BridgeClient {
  readonly metadata: Metadata;
  readonly timings: ServerTiming[] = [];
  private closeCode: number | null = null;
  private closeWaiters: Array<(code: number | null) => void> = [];

  private constructor(
    private socket: WebSocket,
    private inbox: Inbox,
    metadata: Metadata
  ) {
    this.metadata = metadata;
    socket.on("close", (code) => {
      this.closeCode = code;
      for (const waiter of this.closeWaiters.splice(0)) waiter(code);
    });
  }

  static async connect(host: string, port: number, options: ClientOptions = {}): Promise<BridgeClient> {
    const timeoutMs = options.timeoutMs ?? DEFAULT_TIMEOUT_MS;
    const socket = new WebSocket(`ws://${host}:${port}/`);
    socket.binaryType = "nodebuffer";
    const inbox = new Inbox(socket, timeoutMs);

    await new Promise<void>((resolve, reject) => {
      const timer = setTimeout(() => {
        socket.terminate();
        reject(new ConnectFailed(`no connection to ${host}:${port} within ${timeoutMs} ms`));
      }, timeoutMs);
      socket.once("open", () => {
        clearTimeout(timer);
        resolve();
      });
      socket.once("error", (err) => {
        clearTimeout(timer);
        reject(new ConnectFailed(`cannot reach ${host}:${port}: ${err.message}`));
      });
    });

    const meta = parseMetadata(decode(await inbox.next()) as WireMap);
    if (options.expectActionDim !== undefined && meta.actionDim !== options.expectActionDim) {
      socket.close(1000);
      throw new MetadataMismatch(
        `expected action_dim ${options.expectActionDim}, server declares ${meta.actionDim}`
      );
    }
    return new BridgeClient(socket, inbox, meta);
  }

  async infer(obs: WireMap): Promise<WireMap> {
    this.socket.send(encode(obsFrame(obs)));
    const frame = decode(await this.inbox.next()) as WireMap;
    const kind = frameType(frame);
    if (kind === "error") {
      throw new ServerInferenceError(String(frame["message"] ?? ""));
    }
    if (kind !== "action") {
      throw new ProtocolViolation(`expected an action frame, got ${kind}`);
    }
    const data = frame["data"];
    if (data === null || typeof data !== "object" || Array.isArray(data)) {
      throw new ProtocolViolation("action frame carries no data map");
    }
    const timing = (frame["server_timing"] ?? {}) as WireMap;
    this.timings.push({
      inferMs: Number(timing["infer_ms"] ?? 0),
      prevTotalMs: Number(timing["prev_total_ms"] ?? 0),
    });
    return data as WireMap;
  }

  /** Resolves with the close code once the server closes the session. */
  waitClose(timeoutMs = 5000): Promise<number | null> {
    if (this.closeCode !== null) return Promise.resolve(this.closeCode);
    return new Promise((resolve) => {
      const timer = setTimeout(() => resolve(null), timeoutMs);
      this.closeWaiters.push((code) => {
        clearTimeout(timer);
        resolve(code);
      });
    });
  }

  close(): void {
    this.socket.close(1000);
  }
}

function toBytes(raw: Buffer | ArrayBuffer | Buffer[]): Uint8Array {
  if (Array.isArray(raw)) return new Uint8Array(Buffer.concat(raw));
  if (raw instanceof ArrayBuffer) return new Uint8Array(raw);
  return new Uint8Array(raw.buffer, raw.byteOffset, raw.byteLength);
}

export async function bridgeClient(
  host: string,
  port: number,
  options: ClientOptions = {}
): Promise<BridgeClient> {
  return BridgeClient.connect(host, port, options);
}
