/**
 * Session frame shapes.
 *
 * A session is: one metadata push from the server, then obs/action
 * pairs, then a close (1000 normal, 1011 after an error frame).
 * Frames are plain wire maps; builders here fix the key order so a
 * given frame always encodes to the same bytes.
 */

import { Float, WireMap, WireValue } from "./codec.js";

export class ProtocolViolation extends Error {}

export interface Metadata {
  actionDim: number;
  policyName: string;
  checkpoint: string;
  executeSteps: number;
  extra: WireMap;
}

export function metadataFrame(meta: Metadata): WireMap {
  const frame: WireMap = {
    type: "metadata",
    action_dim: meta.actionDim,
    policy_name: meta.policyName,
    checkpoint: meta.checkpoint,
    execute_steps: meta.executeSteps,
  };
  for (const [key, value] of Object.entries(meta.extra)) {
    frame[key] = value;
  }
  return frame;
}

export function parseMetadata(frame: WireMap): Metadata {
  if (frame["type"] !== "metadata") {
    throw new ProtocolViolation("first server frame must be metadata");
  }
  const actionDim = frame["action_dim"];
  if (typeof actionDim !== "number" || !Number.isInteger(actionDim) || actionDim < 1) {
    throw new ProtocolViolation("metadata carries no usable action_dim");
  }
  const extra: WireMap = {};
  const reserved = new Set(["type", "action_dim", "policy_name", "checkpoint", "execute_steps"]);
  for (const [key, value] of Object.entries(frame)) {
    if (!reserved.has(key)) extra[key] = value; // open extension keys, preserved
  }
  return {
    actionDim,
    policyName: String(frame["policy_name"] ?? "policy"),
    checkpoint: String(frame["checkpoint"] ?? ""),
    executeSteps: typeof frame["execute_steps"] === "number" ? frame["execute_steps"] : 1,
    extra,
  };
}

export function obsFrame(data: WireMap): WireMap {
  return { type: "obs", data };
}

export function actionFrame(data: WireMap, inferMs: number, prevTotalMs: number): WireMap {
  return {
    type: "action",
    data,
    server_timing: {
      infer_ms: new Float(inferMs),
      prev_total_ms: new Float(prevTotalMs),
    },
  };
}

export function errorFrame(message: string): WireMap {
  return { type: "error", message };
}

export function frameType(value: WireValue): string {
  if (value === null || typeof value !== "object" || Array.isArray(value)) {
    throw new ProtocolViolation("frame is not a map");
  }
  const type = (value as WireMap)["type"];
  if (typeof type !== "string") {
    throw new ProtocolViolation("frame has no string 'type'");
  }
  return type;
}
