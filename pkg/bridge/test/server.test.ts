import { afterEach, describe, expect, it } from "vitest";
import http from "node:http";

import { bridgeServe, BindFailed, raisingPolicy, randomPolicy, zeroPolicy } from "../src/server.js";
import type { BridgeServer } from "../src/server.js";
import { bridgeClient, ServerInferenceError } from "../src/client.js";
import { episodeObservation } from "../src/episode.js";
import { Tensor } from "../src/tensor.js";

const servers: BridgeServer[] = [];

async function serve(policy = zeroPolicy(4), policyName = "conformance"): Promise<BridgeServer> {
  const server = await bridgeServe({ policy, policyName });
  servers.push(server);
  return server;
}

afterEach(async () => {
  for (const server of servers.splice(0)) {
    await server.close();
  }
});

function getBody(port: number, path: string): Promise<{ status: number; body: string }> {
  return new Promise((resolve, reject) => {
    http
      .get({ host: "127.0.0.1", port, path }, (res) => {
        let body = "";
        res.on("data", (chunk) => (body += chunk));
        res.on("end", () => resolve({ status: res.statusCode ?? 0, body }));
      })
      .on("error", reject);
  });
}

describe("session protocol", () => {
  it("pushes metadata as the first frame", async () => {
    const server = await serve();
    const client = await bridgeClient("127.0.0.1", server.port);
    expect(client.metadata.actionDim).toBe(4);
    expect(client.metadata.policyName).toBe("conformance");
    expect(client.metadata.executeSteps).toBe(1);
    client.close();
  });

  it("answers one obs with one action of the declared shape, with timing", async () => {
    const server = await serve(zeroPolicy(6));
    const client = await bridgeClient("127.0.0.1", server.port);
    const action = await client.infer(episodeObservation(0, 6));
    const tensor = action["actions"] as Tensor;
    expect(tensor).toBeInstanceOf(Tensor);
    expect(tensor.shape).toEqual([6]);
    expect(tensor.toFloat32Array()).toEqual(new Float32Array(6));

    await client.infer(episodeObservation(1, 6));
    expect(client.timings[0]!.inferMs).toBeGreaterThanOrEqual(0);
    expect(client.timings[0]!.prevTotalMs).toBe(0);
    // the second action reports how long the first request took in full
    expect(client.timings[1]!.prevTotalMs).toBeGreaterThan(0);
    client.close();
  });

  it("serves chunked policies as (horizon, action_dim) tensors", async () => {
    const server = await serve(randomPolicy(3, 4, 7));
    const client = await bridgeClient("127.0.0.1", server.port);
    expect(client.metadata.executeSteps).toBe(4);
    const action = await client.infer(episodeObservation(0, 3));
    expect((action["actions"] as Tensor).shape).toEqual([4, 3]);
    client.close();
  });

  it("random policy is deterministic per seed across sessions", async () => {
    const server = await serve(randomPolicy(4, 1, 99));
    const first = await bridgeClient("127.0.0.1", server.port);
    const a = ((await first.infer(episodeObservation(0, 4)))["actions"] as Tensor).extPayload();
    first.close();
    const second = await bridgeClient("127.0.0.1", server.port);
    const b = ((await second.infer(episodeObservation(0, 4)))["actions"] as Tensor).extPayload();
    second.close();
    expect(Buffer.from(a).equals(Buffer.from(b))).toBe(true);
  });

  it("a raising policy sends an error frame and closes 1011", async () => {
    const server = await serve(raisingPolicy(4));
    const client = await bridgeClient("127.0.0.1", server.port);
    const failure = await client.infer(episodeObservation(0, 4)).catch((err) => err);
    expect(failure).toBeInstanceOf(ServerInferenceError);
    expect(String(failure)).toMatch(/deliberate failure/);
    expect(await client.waitClose()).toBe(1011);
  });

  it("a non-obs frame is a session error, not a hang", async () => {
    const server = await serve();
    const { WebSocket } = await import("ws");
    const { encode, decode } = await import("../src/codec.js");
    const socket = new WebSocket(`ws://127.0.0.1:${server.port}/`);
    const frames: unknown[] = [];
    const closed = new Promise<number>((resolve) => socket.on("close", resolve));
    socket.on("message", (raw: Buffer) => frames.push(decode(new Uint8Array(raw))));
    await new Promise((resolve) => socket.once("open", resolve));
    socket.send(encode({ type: "action", data: {} }));
    expect(await closed).toBe(1011);
    // metadata first, then the error frame naming the bad frame type
    expect(frames.length).toBe(2);
    expect((frames[0] as { type: string }).type).toBe("metadata");
    expect((frames[1] as { type: string; message: string }).type).toBe("error");
    expect((frames[1] as { message: string }).message).toMatch(/obs/);
  });
});

describe("liveness and lifecycle", () => {
  it("GET /healthz answers ok on the session port", async () => {
    const server = await serve();
    expect(await getBody(server.port, "/healthz")).toEqual({ status: 200, body: "ok" });
    expect((await getBody(server.port, "/other")).status).toBe(404);
  });

  it("binding an occupied port fails loudly", async () => {
    const server = await serve();
    await expect(bridgeServe({ policy: zeroPolicy(2), port: server.port })).rejects.toThrow(
      BindFailed
    );
  });

  it("close() ends open sessions with a normal 1000", async () => {
    const server = await bridgeServe({ policy: zeroPolicy(2) });
    const client = await bridgeClient("127.0.0.1", server.port);
    await server.close();
    expect(await client.waitClose()).toBe(1000);
  });
});
