import { afterEach, describe, expect, it } from "vitest";

import {
  bridgeClient,
  ConnectFailed,
  MetadataMismatch,
  ServerInferenceError,
} from "../src/client.js";
import { bridgeServe, BridgeServer, randomPolicy, zeroPolicy } from "../src/server.js";
import { episodeObservation } from "../src/episode.js";

const servers: BridgeServer[] = [];

afterEach(async () => {
  while (servers.length > 0) await servers.pop()!.close();
});

async function serve(policy = zeroPolicy(8)) {
  const server = await bridgeServe({ policy, policyName: "client-suite" });
  servers.push(server);
  return server;
}

describe("connection and metadata checks", () => {
  it("connecting to a dead port fails with ConnectFailed", async () => {
    // bind and release an ephemeral port so nothing is listening there
    const probe = await bridgeServe({ policy: zeroPolicy(2) });
    const port = probe.port;
    await probe.close();
    await expect(bridgeClient("127.0.0.1", port, { timeoutMs: 5000 })).rejects.toThrow(
      ConnectFailed
    );
  });

  it("an action_dim assertion failure names both dimensions", async () => {
    const server = await serve(zeroPolicy(8));
    const failure = await bridgeClient("127.0.0.1", server.port, { expectActionDim: 7 }).catch(
      (err) => err
    );
    expect(failure).toBeInstanceOf(MetadataMismatch);
    expect(String(failure)).toContain("expected action_dim 7, server declares 8");
  });

  it("a matching assertion passes and metadata is exposed", async () => {
    const server = await serve(zeroPolicy(8));
    const client = await bridgeClient("127.0.0.1", server.port, { expectActionDim: 8 });
    expect(client.metadata.actionDim).toBe(8);
    expect(client.metadata.policyName).toBe("client-suite");
    await client.close();
  });
});

describe("inference bookkeeping", () => {
  it("records one timing entry per action", async () => {
    const server = await serve(randomPolicy(3, 1, 11));
    const client = await bridgeClient("127.0.0.1", server.port);
    for (let step = 0; step < 4; step += 1) {
      await client.infer(episodeObservation(step, 3));
    }
    expect(client.timings.length).toBe(4);
    expect(client.timings[0]!.prevTotalMs).toBe(0);
    for (const timing of client.timings) {
      expect(timing.inferMs).toBeGreaterThanOrEqual(0);
    }
    // every round trip after the first reports the previous one's total
    for (const timing of client.timings.slice(1)) {
      expect(timing.prevTotalMs).toBeGreaterThan(0);
    }
    await client.close();
  });

  it("server-side failures carry the server's message", async () => {
    const policy = {
      actionDim: 2,
      horizon: 1,
      infer(): never {
        throw new Error("joint limits exceeded");
      },
      reset() {},
    };
    const server = await serve(policy);
    const client = await bridgeClient("127.0.0.1", server.port);
    const failure = await client.infer(episodeObservation(0, 2)).catch((err) => err);
    expect(failure).toBeInstanceOf(ServerInferenceError);
    expect(String(failure)).toContain("joint limits exceeded");
    expect(await client.waitClose()).toBe(1011);
  });
});
