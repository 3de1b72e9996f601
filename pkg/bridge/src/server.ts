/**
 * A minimal policy endpoint: metadata push, obs/action loop with
 * server timing, error frame + 1011 on policy failure, and a plain
 * GET /healthz on the same port.
 *
 * This is a conformance probe, not a feature port: it serves zero and
 * random policies only, so any conforming client can complete an
 * episode against it and compare traces with the reference endpoint.
 */

import http from "node:http";
import { WebSocketServer, WebSocket } from "ws";

import { decode, encode, WireMap } from "./codec.js";
import { Tensor } from "./tensor.js";
import { actionFrame, errorFrame, frameType, metadataFrame } from "./protocol.js";

export class BindFailed extends Error {}

export interface BridgePolicy {
  readonly actionDim: number;
  readonly horizon: number;
  infer(obs: WireMap): WireMap;
  reset(): void;
}

function actionShape(actionDim: number, horizon: number): number[] {
  return horizon > 1 ? [horizon, actionDim] : [actionDim];
}

export function zeroPolicy(actionDim: number, horizon = 1): BridgePolicy {
  return {
    actionDim,
    horizon,
    infer: () => ({ actions: Tensor.zeros("f32", actionShape(actionDim, horizon)) }),
    reset: () => {},
  };
}

/** Deterministic 32-bit PRNG; the stream only needs to be stable, not shared. */
function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let z = state;
    z = Math.imul(z ^ (z >>> 15), z | 1);
    z ^= z + Math.imul(z ^ (z >>> 7), z | 61);
    return ((z ^ (z >>> 14)) >>> 0) / 4294967296;
  };
}

export function randomPolicy(actionDim: number, horizon = 1, seed = 0): BridgePolicy {
  let rng = mulberry32(seed);
  const shape = actionShape(actionDim, horizon);
  const count = shape.reduce((a, b) => a * b, 1);
  return {
    actionDim,
    horizon,
    infer: () => {
      const values = new Float32Array(count);
      for (let i = 0; i < count; i++) values[i] = rng() * 2 - 1;
      return { actions: Tensor.f32(values, shape) };
    },
    reset: () => {
      rng = mulberry32(seed);
    },
  };
}

/** Fails on purpose; exists to exercise the error frame and close 1011. */
export function raisingPolicy(actionDim: number): BridgePolicy {
  return {
    actionDim,
    horizon: 1,
    infer: () => {
      throw new Error("policy raised (deliberate failure for conformance checks)");
    },
    reset: () => {},
  };
}

export const POLICY_KINDS = ["zero", "random"] as const;
export type PolicyKind = (typeof POLICY_KINDS)[number];

export function makePolicy(kind: PolicyKind, actionDim: number, horizon = 1, seed = 0): BridgePolicy {
  if (kind === "zero") return zeroPolicy(actionDim, horizon);
  if (kind === "random") return randomPolicy(actionDim, horizon, seed);
  throw new Error(`unknown policy kind ${kind}`);
}

export interface ServeOptions {
  policy: BridgePolicy;
  port?: number;
  host?: string;
  policyName?: string;
}

export interface BridgeServer {
  readonly port: number;
  readonly host: string;
  close(): Promise<void>;
}

export function bridgeServe(options: ServeOptions): Promise<BridgeServer> {
  const { policy, policyName = "bridge-policy" } = options;
  const host = options.host ?? "127.0.0.1";

  const httpServer = http.createServer((req, res) => {
    if (req.method === "GET" && req.url === "/healthz") {
      res.writeHead(200, { "content-type": "text/plain" });
      res.end("ok");
      return;
    }
    res.writeHead(404);
    res.end();
  });

  const wss = new WebSocketServer({ server: httpServer });
  const open = new Set<WebSocket>();

  wss.on("connection", (socket) => {
    open.add(socket);
    socket.on("close", () => open.delete(socket));

    policy.reset();
    let prevTotalMs = 0;
    socket.send(
      encode(
        metadataFrame({
          actionDim: policy.actionDim,
          policyName,
          checkpoint: "",
          executeSteps: policy.horizon,
          extra: {},
        })
      )
    );

    socket.on("message", (raw, isBinary) => {
      const started = performance.now();
      try {
        if (!isBinary) {
          throw new Error("frames must be binary WebSocket messages");
        }
        const frame = decode(toBytes(raw)) as WireMap;
        if (frameType(frame) !== "obs") {
          throw new Error(`expected an obs frame, got ${frameType(frame)}`);
        }
        const obs = frame["data"];
        if (obs === null || typeof obs !== "object" || Array.isArray(obs)) {
          throw new Error("obs frame carries no data map");
        }
        const inferStart = performance.now();
        const action = policy.infer(obs as WireMap);
        const inferMs = performance.now() - inferStart;
        socket.send(encode(actionFrame(action, inferMs, prevTotalMs)));
        prevTotalMs = performance.now() - started;
      } catch (err) {
        const reason = err instanceof Error ? `${err.name}: ${err.message}` : String(err);
        try {
          socket.send(encode(errorFrame(reason)));
        } finally {
          socket.close(1011, "policy failure");
        }
      }
    });
  });

  return new Promise((resolve, reject) => {
    const bindError = (err: Error) => {
      reject(new BindFailed(`cannot bind ${host}:${options.port ?? 0}: ${err.message}`));
    };
    httpServer.once("error", bindError);
    // ws re-emits server errors on the WebSocketServer; leaving that
    // emitter without a listener turns a failed bind into a crash
    wss.on("error", bindError);
    httpServer.listen(options.port ?? 0, host, () => {
      const address = httpServer.address();
      if (address === null || typeof address === "string") {
        reject(new BindFailed("listener has no TCP address"));
        return;
      }
      resolve({
        port: address.port,
        host,
        close: () =>
          new Promise<void>((done) => {
            for (const socket of open) socket.close(1000);
            wss.close(() => httpServer.close(() => done()));
          }),
      });
    });
  });
}

function toBytes(raw: unknown): Uint8Array {
  if (raw instanceof Buffer) return new Uint8Array(raw.buffer, raw.byteOffset, raw.byteLength);
  if (raw instanceof ArrayBuffer) return new Uint8Array(raw);
  if (Array.isArray(raw)) return new Uint8Array(Buffer.concat(raw));
  throw new Error("unsupported message payload");
}
