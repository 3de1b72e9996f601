/**
 * The conformance episode: a fixed, deterministic observation stream
 * and a digest of every tensor payload that crossed the wire.
 *
 * Any client implementation that runs this episode against any
 * conforming server must produce the same summary: same frame counts,
 * and byte-identical obs/action tensor payload hashes when the server
 * policy is deterministic. Hashes cover the full extension payload
 * (dtype, rank, shape words, raw data), so layout drift is caught,
 * not just value drift.
 */

import { createHash, Hash } from "node:crypto";

import { WireMap } from "./codec.js";
import { Tensor } from "./tensor.js";
import { BridgeClient } from "./client.js";

export interface EpisodeSummary {
  action_dim: number;
  steps: number;
  metadata_frames: number;
  obs_frames: number;
  action_frames: number;
  obs_sha256: string;
  action_sha256: string;
}

/**
 * Step t of the stream is a float32 vector whose entries are small
 * integers, exactly representable in every IEEE-754 implementation:
 * value(t, j) = (31 t + 7 j) mod 17 - 8.
 */
export function episodeObservation(step: number, actionDim: number): WireMap {
  const values = new Float32Array(actionDim);
  for (let j = 0; j < actionDim; j++) {
    values[j] = ((31 * step + 7 * j) % 17) - 8;
  }
  return { state: Tensor.f32(values), step };
}

function digestTensors(hash: Hash, data: WireMap): void {
  for (const key of Object.keys(data).sort()) {
    const value = data[key];
    if (value instanceof Tensor) {
      hash.update(value.extPayload());
    }
  }
}

export async function runEpisode(
  client: BridgeClient,
  steps: number
): Promise<EpisodeSummary> {
  const actionDim = client.metadata.actionDim;
  const obsHash = createHash("sha256");
  const actionHash = createHash("sha256");
  let obsFrames = 0;
  let actionFrames = 0;

  for (let step = 0; step < steps; step++) {
    const obs = episodeObservation(step, actionDim);
    digestTensors(obsHash, obs);
    obsFrames += 1;
    const action = await client.infer(obs);
    digestTensors(actionHash, action);
    actionFrames += 1;
  }

  return {
    action_dim: actionDim,
    steps,
    metadata_frames: 1,
    obs_frames: obsFrames,
    action_frames: actionFrames,
    obs_sha256: obsHash.digest("hex"),
    action_sha256: actionHash.digest("hex"),
  };
}
