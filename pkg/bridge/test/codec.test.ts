import { describe, expect, it } from "vitest";

import { CodecError, decode, encode, Float, WireValue } from "../src/codec.js";
import { Tensor } from "../src/tensor.js";

const hex = (b: Uint8Array) => Buffer.from(b).toString("hex");
const bytes = (h: string) => new Uint8Array(Buffer.from(h, "hex"));

describe("canonical encoding", () => {
  // golden vectors derived from the wire-format document by hand
  const goldens: Array<[string, WireValue, string]> = [
    ["nil", null, "c0"],
    ["true/false", [true, false], "92c3c2"],
    ["zero", 0, "00"],
    ["positive fixint edge", 127, "7f"],
    ["uint8 edge", 255, "ccff"],
    ["uint16", 256, "cd0100"],
    ["uint32", 65536, "ce00010000"],
    ["uint64", 4294967296n, "cf0000000100000000"],
    ["int64 max", 9223372036854775807n, "cf7fffffffffffffff"],
    ["negative fixint edge", -32, "e0"],
    ["int8", -33, "d0df"],
    ["int16", -129, "d1ff7f"],
    ["int32", -32769, "d2ffff7fff"],
    ["int64 min", -9223372036854775808n, "d38000000000000000"],
    ["float zero stays a float", new Float(0), "cb0000000000000000"],
    ["float 1.5", 1.5, "cb3ff8000000000000"],
    ["empty string", "", "a0"],
    ["fixstr", "type", "a474797065"],
    ["str8 at 32 chars", "b".repeat(32), "d920" + "62".repeat(32)],
    ["bin", new Uint8Array([0, 1, 254, 255]), "c4040001feff"],
    ["map keeps insertion order", { b: 1, a: 2 }, "82a16201a16102"],
    [
      "f32 2x3 zeros tensor uses ext8",
      Tensor.zeros("f32", [2, 3]),
      "c7222a00020200000003000000" + "00".repeat(24),
    ],
    ["u8 [2] tensor lands on fixext8", new Tensor("u8", [2], Uint8Array.of(7, 9)), "d72a0401020000000709"],
    [
      "rank-0 f64 tensor",
      new Tensor("f64", [], bytes("0000000000000c40")),
      "c70a2a01000000000000000c40",
    ],
  ];

  it.each(goldens)("%s", (_name, value, expected) => {
    expect(hex(encode(value))).toBe(expected.replace(/ /g, ""));
  });

  it("re-encoding a decoded document reproduces the bytes", () => {
    const doc: WireValue = {
      type: "obs",
      step: 3,
      data: { state: Tensor.f32([1, 2, 3, 4]), label: "pick", flags: [true, null] },
    };
    const once = encode(doc);
    expect(hex(encode(decode(once)))).toBe(hex(once));
  });

  it("rejects maps whose keys would lose insertion order", () => {
    expect(() => encode({ "0": 1 } as never)).toThrow(CodecError);
  });

  it("rejects integers beyond signed 64-bit", () => {
    expect(() => encode(2n ** 63n)).toThrow(CodecError);
    expect(() => encode(-(2n ** 63n) - 1n)).toThrow(CodecError);
  });

  it("encodes -0 as a float so the sign bit survives", () => {
    expect(hex(encode(-0))).toBe("cb8000000000000000");
  });
});

describe("decode strictness", () => {
  it("rejects trailing bytes", () => {
    expect(() => decode(bytes("c000"))).toThrow(/trailing/);
  });

  it("rejects the reserved byte 0xc1", () => {
    expect(() => decode(bytes("c1"))).toThrow(/0xc1/);
  });

  it("rejects duplicate map keys", () => {
    // {"a": 1, "a": 2}
    expect(() => decode(bytes("82a16101a16102"))).toThrow(/duplicate/);
  });

  it("rejects non-string map keys", () => {
    // {1: 2}
    expect(() => decode(bytes("810102"))).toThrow(/string/);
  });

  it("rejects uint64 above the signed range", () => {
    expect(() => decode(bytes("cfffffffffffffffff"))).toThrow(/signed 64-bit/);
  });

  it("rejects unknown extension tags, timestamp included", () => {
    expect(() => decode(bytes("d40100"))).toThrow(/extension/); // fixext1 tag 1
    expect(() => decode(bytes("d6ff00000000"))).toThrow(/extension/); // timestamp -1
  });

  it("rejects invalid UTF-8", () => {
    expect(() => decode(bytes("a1ff"))).toThrow(/UTF-8/);
  });

  it("accepts float32 on decode without ever producing it", () => {
    expect(decode(bytes("ca3fc00000"))).toBe(1.5);
    expect(hex(encode(1.5))).toBe("cb3ff8000000000000");
  });

  it("rejects truncated documents", () => {
    expect(() => decode(bytes("92c3"))).toThrow(/truncated/);
  });

  it("enforces the 32-level depth limit symmetrically", () => {
    let nested: WireValue = 1;
    for (let i = 0; i < 31; i++) nested = [nested];
    const ok = encode(nested); // depth exactly 32
    expect(decode(ok)).toEqual(JSON.parse(JSON.stringify(nestedAsArrays(31))));
    expect(() => encode([nested])).toThrow(/nesting/);
    expect(() => decode(bytes("91".repeat(32) + "01"))).toThrow(/nesting/);
  });

  it("rejects tensor payloads whose data length disagrees with the shape", () => {
    // dtype f32, rank 1, shape [2], but only 4 data bytes instead of 8
    expect(() => decode(bytes("c70a2a00010200000000000000"))).toThrow(/tensor/);
  });

  it("rejects unknown tensor dtype codes", () => {
    expect(() => decode(bytes("d52a0900"))).toThrow(/dtype/);
  });
});

describe("tensor round trips", () => {
  it("preserves rank-0 through encode/decode", () => {
    const scalar = new Tensor("f64", [], new Uint8Array(8));
    const back = decode(encode(scalar)) as Tensor;
    expect(back.shape).toEqual([]);
    expect(back.data.length).toBe(8);
  });

  it("preserves payload bytes exactly for every dtype", () => {
    const cases: Tensor[] = [
      Tensor.f32([1.5, -2.25, 3], [3]),
      Tensor.zeros("f64", [2, 2]),
      new Tensor("i32", [2], bytes("0100000002000000")),
      new Tensor("i64", [1], bytes("ffffffffffffffff")),
      new Tensor("u8", [2, 2, 3], new Uint8Array(12).fill(9)),
      new Tensor("bool", [2], Uint8Array.of(1, 0)),
    ];
    for (const tensor of cases) {
      const back = decode(encode(tensor)) as Tensor;
      expect(back.dtype).toBe(tensor.dtype);
      expect(back.shape).toEqual([...tensor.shape]);
      expect(hex(back.extPayload())).toBe(hex(tensor.extPayload()));
    }
  });
});

function nestedAsArrays(levels: number): unknown {
  let out: unknown = 1;
  for (let i = 0; i < levels; i++) out = [out];
  return out;
}
