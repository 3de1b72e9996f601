/**
 * Command line for the bridge endpoint, flag-compatible with the
 * reference policy server: --port, --action-dim, --kind (plus
 * --horizon, --seed, --host). `serve` announces "PORT <n>" on stdout
 * so supervisors can wait for readiness the same way in both
 * languages. `episode` runs the conformance episode against a running
 * server and prints the summary as JSON.
 */

import { bridgeServe, makePolicy, POLICY_KINDS, PolicyKind } from "./server.js";
import { bridgeClient } from "./client.js";
import { runEpisode } from "./episode.js";

interface Flags {
  [name: string]: string;
}

/** Bad flags exit 2; runtime failures exit 1. */
class UsageError extends Error {}

function parseFlags(argv: string[]): Flags {
  const flags: Flags = {};
  for (let i = 0; i < argv.length; i += 2) {
    const name = argv[i];
    const value = argv[i + 1];
    if (name === undefined || !name.startsWith("--") || value === undefined) {
      throw new UsageError(`flags come in --name value pairs, got ${name ?? "(nothing)"}`);
    }
    flags[name.slice(2)] = value;
  }
  return flags;
}

function intFlag(flags: Flags, name: string, fallback?: number): number {
  const raw = flags[name];
  if (raw === undefined) {
    if (fallback === undefined) throw new UsageError(`--${name} is required`);
    return fallback;
  }
  const value = Number(raw);
  if (!Number.isInteger(value)) throw new UsageError(`--${name} must be an integer, got ${raw}`);
  return value;
}

async function serve(flags: Flags): Promise<void> {
  const actionDim = intFlag(flags, "action-dim");
  const kind = (flags["kind"] ?? "zero") as PolicyKind;
  if (!POLICY_KINDS.includes(kind)) {
    throw new UsageError(`--kind must be one of ${POLICY_KINDS.join("|")}, got ${kind}`);
  }
  const policy = makePolicy(kind, actionDim, intFlag(flags, "horizon", 1), intFlag(flags, "seed", 0));
  const server = await bridgeServe({
    policy,
    port: intFlag(flags, "port", 0),
    host: flags["host"] ?? "127.0.0.1",
    policyName: flags["name"] ?? "bridge-policy",
  });
  console.log(`PORT ${server.port}`);

  await new Promise<void>((resolve) => {
    process.on("SIGTERM", resolve);
    process.on("SIGINT", resolve);
  });
  await server.close();
}

async function episode(flags: Flags): Promise<void> {
  const client = await bridgeClient(flags["host"] ?? "127.0.0.1", intFlag(flags, "port"), {
    expectActionDim: flags["action-dim"] === undefined ? undefined : intFlag(flags, "action-dim"),
  });
  try {
    const summary = await runEpisode(client, intFlag(flags, "steps", 10));
    console.log(JSON.stringify(summary));
  } finally {
    client.close();
  }
}

export async function main(argv: string[]): Promise<number> {
  const [verb, ...rest] = argv;
  try {
    if (verb === "serve") {
      await serve(parseFlags(rest));
      return 0;
    }
    if (verb === "episode") {
      await episode(parseFlags(rest));
      return 0;
    }
    console.error("usage: bridge <serve|episode> [--flag value ...]");
    return 2;
  } catch (err) {
    console.error(`bridge: ${err instanceof Error ? err.message : String(err)}`);
    return err instanceof UsageError ? 2 : 1;
  }
}

const invokedDirectly = process.argv[1]?.endsWith("cli.js") || process.argv[1]?.endsWith("cli.ts");
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
