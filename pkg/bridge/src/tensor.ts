/**
 * Dense tensor values as they travel inside extension tag 42.
 *
 * Extension payload layout (everything little-endian):
 *   [dtype: 1 byte][rank: 1 byte][shape: rank x uint32][raw row-major data]
 */

export const TENSOR_EXT_TAG = 42;

export type DtypeName = "f32" | "f64" | "i32" | "i64" | "u8" | "bool";

const DTYPE_CODES: Record<DtypeName, number> = {
  f32: 0,
  f64: 1,
  i32: 2,
  i64: 3,
  u8: 4,
  bool: 5,
};

const CODE_TO_DTYPE: Record<number, DtypeName> = {
  0: "f32",
  1: "f64",
  2: "i32",
  3: "i64",
  4: "u8",
  5: "bool",
};

const ITEM_SIZE: Record<DtypeName, number> = {
  f32: 4,
  f64: 8,
  i32: 4,
  i64: 8,
  u8: 1,
  bool: 1,
};

export class TensorError extends Error {}

function elementCount(shape: readonly number[]): number {
  // rank 0 is a scalar: no shape words, exactly one element
  let count = 1;
  for (const dim of shape) {
    if (!Number.isInteger(dim) || dim < 0 || dim > 0xffffffff) {
      throw new TensorError(`shape dimension out of range: ${dim}`);
    }
    count *= dim;
  }
  return count;
}

export class Tensor {
  readonly dtype: DtypeName;
  readonly shape: readonly number[];
  readonly data: Uint8Array;

  constructor(dtype: DtypeName, shape: readonly number[], data: Uint8Array) {
    if (!(dtype in DTYPE_CODES)) {
      throw new TensorError(`unknown dtype ${dtype}`);
    }
    if (shape.length > 255) {
      throw new TensorError(`rank ${shape.length} does not fit one byte`);
    }
    const expected = elementCount(shape) * ITEM_SIZE[dtype];
    if (data.length !== expected) {
      throw new TensorError(
        `data length ${data.length} does not match dtype/shape (expected ${expected})`
      );
    }
    this.dtype = dtype;
    this.shape = Object.freeze([...shape]);
    this.data = data;
  }

  static f32(values: ArrayLike<number>, shape?: readonly number[]): Tensor {
    const arr = Float32Array.from(values);
    return new Tensor("f32", shape ?? [arr.length], leBytes(arr));
  }

  static zeros(dtype: DtypeName, shape: readonly number[]): Tensor {
    return new Tensor(dtype, shape, new Uint8Array(elementCount(shape) * ITEM_SIZE[dtype]));
  }

  /** The full ext-42 payload: dtype, rank, shape words, raw data. */
  extPayload(): Uint8Array {
    const out = new Uint8Array(2 + 4 * this.shape.length + this.data.length);
    const view = new DataView(out.buffer);
    out[0] = DTYPE_CODES[this.dtype];
    out[1] = this.shape.length;
    this.shape.forEach((dim, i) => view.setUint32(2 + 4 * i, dim, true));
    out.set(this.data, 2 + 4 * this.shape.length);
    return out;
  }

  static fromExtPayload(payload: Uint8Array): Tensor {
    if (payload.length < 2) {
      throw new TensorError("tensor payload shorter than its two header bytes");
    }
    const dtype = CODE_TO_DTYPE[payload[0]!];
    if (dtype === undefined) {
      throw new TensorError(`unknown dtype code ${payload[0]}`);
    }
    const rank = payload[1]!;
    if (payload.length < 2 + 4 * rank) {
      throw new TensorError("tensor payload truncated inside the shape words");
    }
    const view = new DataView(payload.buffer, payload.byteOffset, payload.byteLength);
    const shape: number[] = [];
    for (let i = 0; i < rank; i++) {
      shape.push(view.getUint32(2 + 4 * i, true));
    }
    const data = payload.subarray(2 + 4 * rank);
    return new Tensor(dtype, shape, data);
  }

  /** Decode the raw data as float32 elements. */
  toFloat32Array(): Float32Array {
    if (this.dtype !== "f32") {
      throw new TensorError(`toFloat32Array on dtype ${this.dtype}`);
    }
    const view = new DataView(this.data.buffer, this.data.byteOffset, this.data.byteLength);
    const out = new Float32Array(this.data.length / 4);
    for (let i = 0; i < out.length; i++) {
      out[i] = view.getFloat32(4 * i, true);
    }
    return out;
  }
}

function leBytes(arr: Float32Array): Uint8Array {
  // explicit little-endian writes; never trust platform byte order
  const out = new Uint8Array(arr.length * 4);
  const view = new DataView(out.buffer);
  arr.forEach((v, i) => view.setFloat32(4 * i, v, true));
  return out;
}
