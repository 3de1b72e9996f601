/**
 * Canonical binary codec for harness wire documents.
 *
 * MessagePack-compatible containers with one application extension
 * (tag 42, dense tensors). Written against docs/wire-format.md in the
 * host package; no code is shared with the Python side. The invariant
 * that matters: the same document always encodes to the same bytes,
 * and anything that would not round-trip bit-exactly is a decode error.
 */

import { Tensor, TENSOR_EXT_TAG } from "./tensor.js";

export class CodecError extends Error {}

/**
 * Forces float64 encoding for numbers that happen to be integral.
 * JS has one number type, but the wire distinguishes int from float;
 * timing fields are floats even when their value is exactly 0.
 */
export class Float {
  constructor(readonly value: number) {}
}

export type WireValue =
  | null
  | boolean
  | number
  | bigint
  | Float
  | string
  | Uint8Array
  | Tensor
  | WireValue[]
  | WireMap;

export interface WireMap {
  [key: string]: WireValue;
}

const MAX_DEPTH = 32;
const INT64_MIN = -(2n ** 63n);
const INT64_MAX = 2n ** 63n - 1n;

const utf8Encode = new TextEncoder();
// fatal: invalid UTF-8 must be a decode error, not replacement characters
const utf8Decode = new TextDecoder("utf-8", { fatal: true });

// ---------------------------------------------------------------- encode

class Writer {
  private chunks: Uint8Array[] = [];
  private scratch = new DataView(new ArrayBuffer(9));

  byte(b: number): void {
    this.chunks.push(Uint8Array.of(b));
  }

  bytes(b: Uint8Array): void {
    this.chunks.push(b);
  }

  u8(tag: number, v: number): void {
    this.chunks.push(Uint8Array.of(tag, v));
  }

  u16(tag: number, v: number): void {
    this.scratch.setUint8(0, tag);
    this.scratch.setUint16(1, v, false);
    this.chunks.push(new Uint8Array(this.scratch.buffer.slice(0, 3)));
  }

  u32(tag: number, v: number): void {
    this.scratch.setUint8(0, tag);
    this.scratch.setUint32(1, v, false);
    this.chunks.push(new Uint8Array(this.scratch.buffer.slice(0, 5)));
  }

  u64(tag: number, v: bigint): void {
    this.scratch.setUint8(0, tag);
    this.scratch.setBigUint64(1, v, false);
    this.chunks.push(new Uint8Array(this.scratch.buffer.slice(0, 9)));
  }

  i64(tag: number, v: bigint): void {
    this.scratch.setUint8(0, tag);
    this.scratch.setBigInt64(1, v, false);
    this.chunks.push(new Uint8Array(this.scratch.buffer.slice(0, 9)));
  }

  f64(v: number): void {
    this.scratch.setUint8(0, 0xcb);
    this.scratch.setFloat64(1, v, false);
    this.chunks.push(new Uint8Array(this.scratch.buffer.slice(0, 9)));
  }

  finish(): Uint8Array {
    let total = 0;
    for (const c of this.chunks) total += c.length;
    const out = new Uint8Array(total);
    let at = 0;
    for (const c of this.chunks) {
      out.set(c, at);
      at += c.length;
    }
    return out;
  }
}

function encodeInt(w: Writer, v: bigint): void {
  if (v < INT64_MIN || v > INT64_MAX) {
    throw new CodecError(`integer out of signed 64-bit range: ${v}`);
  }
  if (v >= 0n) {
    if (v <= 0x7fn) w.byte(Number(v));
    else if (v <= 0xffn) w.u8(0xcc, Number(v));
    else if (v <= 0xffffn) w.u16(0xcd, Number(v));
    else if (v <= 0xffffffffn) w.u32(0xce, Number(v));
    else w.u64(0xcf, v);
  } else {
    if (v >= -32n) w.byte(0x100 + Number(v));
    else if (v >= -128n) w.u8(0xd0, Number(v) & 0xff);
    else if (v >= -32768n) w.u16(0xd1, Number(v) & 0xffff);
    else if (v >= -2147483648n) w.u32(0xd2, Number(v) >>> 0);
    else w.i64(0xd3, v);
  }
}

function encodeString(w: Writer, s: string): void {
  const bytes = utf8Encode.encode(s);
  const n = bytes.length;
  if (n <= 31) w.byte(0xa0 | n);
  else if (n <= 0xff) w.u8(0xd9, n);
  else if (n <= 0xffff) w.u16(0xda, n);
  else w.u32(0xdb, n);
  w.bytes(bytes);
}

function encodeBin(w: Writer, b: Uint8Array): void {
  const n = b.length;
  if (n <= 0xff) w.u8(0xc4, n);
  else if (n <= 0xffff) w.u16(0xc5, n);
  else w.u32(0xc6, n);
  w.bytes(b);
}

function encodeExt(w: Writer, tag: number, payload: Uint8Array): void {
  const n = payload.length;
  const fix: Record<number, number> = { 1: 0xd4, 2: 0xd5, 4: 0xd6, 8: 0xd7, 16: 0xd8 };
  const fixTag = fix[n];
  if (fixTag !== undefined) {
    w.byte(fixTag);
  } else if (n <= 0xff) {
    w.u8(0xc7, n);
  } else if (n <= 0xffff) {
    w.u16(0xc8, n);
  } else {
    w.u32(0xc9, n);
  }
  w.byte(tag & 0xff);
  w.bytes(payload);
}

function encodeValue(w: Writer, value: WireValue, depth: number): void {
  if (depth > MAX_DEPTH) {
    throw new CodecError(`nesting deeper than ${MAX_DEPTH} levels`);
  }
  if (value === null) {
    w.byte(0xc0);
  } else if (typeof value === "boolean") {
    w.byte(value ? 0xc3 : 0xc2);
  } else if (typeof value === "bigint") {
    encodeInt(w, value);
  } else if (value instanceof Float) {
    w.f64(value.value);
  } else if (typeof value === "number") {
    if (Number.isInteger(value) && !Object.is(value, -0)) {
      encodeInt(w, BigInt(value));
    } else {
      // fractional values and -0, whose sign bit only a float can carry
      w.f64(value);
    }
  } else if (typeof value === "string") {
    encodeString(w, value);
  } else if (value instanceof Uint8Array) {
    encodeBin(w, value);
  } else if (value instanceof Tensor) {
    encodeExt(w, TENSOR_EXT_TAG, value.extPayload());
  } else if (Array.isArray(value)) {
    const n = value.length;
    if (n <= 15) w.byte(0x90 | n);
    else if (n <= 0xffff) w.u16(0xdc, n);
    else w.u32(0xdd, n);
    for (const item of value) encodeValue(w, item, depth + 1);
  } else if (typeof value === "object") {
    // plain objects keep string-key insertion order, which is the
    // canonical map order; numeric-looking keys would not, so they
    // are rejected rather than silently reordered
    const keys = Object.keys(value);
    for (const key of keys) {
      if (String(Number(key)) === key) {
        throw new CodecError(`map key ${JSON.stringify(key)} would lose insertion order`);
      }
    }
    const n = keys.length;
    if (n <= 15) w.byte(0x80 | n);
    else if (n <= 0xffff) w.u16(0xde, n);
    else w.u32(0xdf, n);
    for (const key of keys) {
      encodeString(w, key);
      encodeValue(w, (value as WireMap)[key]!, depth + 1);
    }
  } else {
    throw new CodecError(`cannot encode value of type ${typeof value}`);
  }
}

export function encode(value: WireValue): Uint8Array {
  const w = new Writer();
  encodeValue(w, value, 1);
  return w.finish();
}

// ---------------------------------------------------------------- decode

class Reader {
  private at = 0;
  private view: DataView;

  constructor(private buf: Uint8Array) {
    this.view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  }

  get remaining(): number {
    return this.buf.length - this.at;
  }

  take(n: number): Uint8Array {
    if (this.at + n > this.buf.length) {
      throw new CodecError("document truncated");
    }
    const out = this.buf.subarray(this.at, this.at + n);
    this.at += n;
    return out;
  }

  byte(): number {
    if (this.at >= this.buf.length) throw new CodecError("document truncated");
    return this.buf[this.at++]!;
  }

  u16(): number {
    const v = this.view.getUint16(this.checked(2), false);
    return v;
  }

  u32(): number {
    return this.view.getUint32(this.checked(4), false);
  }

  u64(): bigint {
    return this.view.getBigUint64(this.checked(8), false);
  }

  i8(): number {
    return this.view.getInt8(this.checked(1));
  }

  i16(): number {
    return this.view.getInt16(this.checked(2), false);
  }

  i32(): number {
    return this.view.getInt32(this.checked(4), false);
  }

  i64(): bigint {
    return this.view.getBigInt64(this.checked(8), false);
  }

  f32(): number {
    return this.view.getFloat32(this.checked(4), false);
  }

  f64(): number {
    return this.view.getFloat64(this.checked(8), false);
  }

  private checked(n: number): number {
    if (this.at + n > this.buf.length) throw new CodecError("document truncated");
    const start = this.at;
    this.at += n;
    return start;
  }
}

function intOut(v: bigint): number | bigint {
  // exact as a number when safe, bigint beyond 2^53
  if (v >= BigInt(Number.MIN_SAFE_INTEGER) && v <= BigInt(Number.MAX_SAFE_INTEGER)) {
    return Number(v);
  }
  return v;
}

function decodeString(r: Reader, n: number): string {
  try {
    return utf8Decode.decode(r.take(n));
  } catch {
    throw new CodecError("invalid UTF-8 in string");
  }
}

function decodeMap(r: Reader, n: number, depth: number): WireMap {
  const out: WireMap = {};
  const seen = new Set<string>();
  for (let i = 0; i < n; i++) {
    const tag = r.byte();
    let key: string;
    if (tag >= 0xa0 && tag <= 0xbf) key = decodeString(r, tag & 0x1f);
    else if (tag === 0xd9) key = decodeString(r, r.byte());
    else if (tag === 0xda) key = decodeString(r, r.u16());
    else if (tag === 0xdb) key = decodeString(r, r.u32());
    else throw new CodecError(`map key must be a string (tag 0x${tag.toString(16)})`);
    if (seen.has(key)) {
      throw new CodecError(`duplicate map key ${JSON.stringify(key)}`);
    }
    seen.add(key);
    out[key] = decodeValue(r, depth + 1);
  }
  return out;
}

function decodeExt(r: Reader, n: number): Tensor {
  const tag = r.i8();
  if (tag !== TENSOR_EXT_TAG) {
    throw new CodecError(`unknown extension tag ${tag}`);
  }
  try {
    return Tensor.fromExtPayload(r.take(n));
  } catch (err) {
    throw new CodecError(`bad tensor payload: ${(err as Error).message}`);
  }
}

function decodeValue(r: Reader, depth: number): WireValue {
  if (depth > MAX_DEPTH) {
    throw new CodecError(`nesting deeper than ${MAX_DEPTH} levels`);
  }
  const tag = r.byte();
  if (tag <= 0x7f) return tag;
  if (tag >= 0xe0) return tag - 0x100;
  if (tag >= 0x80 && tag <= 0x8f) return decodeMap(r, tag & 0x0f, depth);
  if (tag >= 0x90 && tag <= 0x9f) return decodeArray(r, tag & 0x0f, depth);
  if (tag >= 0xa0 && tag <= 0xbf) return decodeString(r, tag & 0x1f);
  switch (tag) {
    case 0xc0:
      return null;
    case 0xc1:
      throw new CodecError("reserved byte 0xc1");
    case 0xc2:
      return false;
    case 0xc3:
      return true;
    case 0xc4:
      return new Uint8Array(r.take(r.byte()));
    case 0xc5:
      return new Uint8Array(r.take(r.u16()));
    case 0xc6:
      return new Uint8Array(r.take(r.u32()));
    case 0xc7:
      return decodeExt(r, r.byte());
    case 0xc8:
      return decodeExt(r, r.u16());
    case 0xc9:
      return decodeExt(r, r.u32());
    case 0xca:
      // accepted for foreign encoders; canonical documents never carry it
      return r.f32();
    case 0xcb:
      return r.f64();
    case 0xcc:
      return r.byte();
    case 0xcd:
      return r.u16();
    case 0xce:
      return r.u32();
    case 0xcf: {
      const v = r.u64();
      if (v > INT64_MAX) {
        throw new CodecError(`uint64 ${v} exceeds the signed 64-bit range`);
      }
      return intOut(v);
    }
    case 0xd0:
      return r.i8();
    case 0xd1:
      return r.i16();
    case 0xd2:
      return r.i32();
    case 0xd3:
      return intOut(r.i64());
    case 0xd4:
      return decodeExt(r, 1);
    case 0xd5:
      return decodeExt(r, 2);
    case 0xd6:
      return decodeExt(r, 4);
    case 0xd7:
      return decodeExt(r, 8);
    case 0xd8:
      return decodeExt(r, 16);
    case 0xd9:
      return decodeString(r, r.byte());
    case 0xda:
      return decodeString(r, r.u16());
    case 0xdb:
      return decodeString(r, r.u32());
    case 0xdc:
      return decodeArray(r, r.u16(), depth);
    case 0xdd:
      return decodeArray(r, r.u32(), depth);
    case 0xde:
      return decodeMap(r, r.u16(), depth);
    case 0xdf:
      return decodeMap(r, r.u32(), depth);
    default:
      throw new CodecError(`unhandled tag byte 0x${tag.toString(16)}`);
  }
}

function decodeArray(r: Reader, n: number, depth: number): WireValue[] {
  const out: WireValue[] = [];
  for (let i = 0; i < n; i++) out.push(decodeValue(r, depth + 1));
  return out;
}

export function decode(buf: Uint8Array): WireValue {
  const r = new Reader(buf);
  const value = decodeValue(r, 1);
  if (r.remaining !== 0) {
    throw new CodecError(`${r.remaining} trailing byte(s) after the document`);
  }
  return value;
}
