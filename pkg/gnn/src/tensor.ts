/**
 * Minimal dense float64 matrix helpers.
 *
 * Matrices are row-major Float64Arrays with explicit (rows, cols); nothing
 * here allocates per element, and every routine is deterministic.
 */

export function zeros(size: number): Float64Array {
  return new Float64Array(size);
}

/** out[n x p] = a[n x m] . b[m x p] (accumulating into out when given). */
export function matmul(
  a: Float64Array, b: Float64Array, n: number, m: number, p: number,
  out?: Float64Array,
): Float64Array {
  const result = out ?? new Float64Array(n * p);
  for (let i = 0; i < n; i++) {
    const rowA = i * m;
    const rowOut = i * p;
    for (let k = 0; k < m; k++) {
      const aik = a[rowA + k];
      if (aik === 0) continue;
      const rowB = k * p;
      for (let j = 0; j < p; j++) {
        result[rowOut + j] += aik * b[rowB + j];
      }
    }
  }
  return result;
}

/** out[m x p] += a^T[m x n] . g[n x p], with a given as [n x m]. */
export function matmulTransA(
  a: Float64Array, g: Float64Array, n: number, m: number, p: number,
  out: Float64Array,
): Float64Array {
  for (let i = 0; i < n; i++) {
    const rowA = i * m;
    const rowG = i * p;
    for (let k = 0; k < m; k++) {
      const aik = a[rowA + k];
      if (aik === 0) continue;
      const rowOut = k * p;
      for (let j = 0; j < p; j++) {
        out[rowOut + j] += aik * g[rowG + j];
      }
    }
  }
  return out;
}

/** out[n x m] += g[n x p] . b^T[p x m], with b given as [m x p]. */
export function matmulTransB(
  g: Float64Array, b: Float64Array, n: number, m: number, p: number,
  out: Float64Array,
): Float64Array {
  for (let i = 0; i < n; i++) {
    const rowG = i * p;
    const rowOut = i * m;
    for (let k = 0; k < m; k++) {
      const rowB = k * p;
      let sum = 0;
      for (let j = 0; j < p; j++) {
        sum += g[rowG + j] * b[rowB + j];
      }
      out[rowOut + k] += sum;
    }
  }
  return out;
}

/** Deterministic 32-bit seeded generator (mulberry32). */
export function makeRng(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Glorot-uniform initialized [rows x cols] matrix. */
export function glorot(rows: number, cols: number, rng: () => number): Float64Array {
  const limit = Math.sqrt(6 / (rows + cols));
  const out = new Float64Array(rows * cols);
  for (let i = 0; i < out.length; i++) {
    out[i] = (2 * rng() - 1) * limit;
  }
  return out;
}

/** Fisher-Yates shuffle of an index array, in place. */
export function shuffleIndices(indices: Int32Array, rng: () => number): void {
  for (let i = indices.length - 1; i > 0; i--) {
    const j = Math.floor(rng() * (i + 1));
    const tmp = indices[i];
    indices[i] = indices[j];
    indices[j] = tmp;
  }
}
