/**
 * Attention message passing over knot graphs, with exact hand-derived
 * gradients in float64.
 *
 * Architecture: four transformer-style message-passing layers conditioned
 * on edge attributes, each followed by batch normalization and tanh; then
 * graph-level mean/max/min pooling, concatenation with ten per-knot
 * features (optionally normalized), and a four-layer perceptron with 25
 * hidden units ending in one regression output.
 *
 * Per layer, for an arc j -> i with attribute vector e:
 *   score = <W_q x_i, W_k x_j + W_e e> / sqrt(H)
 *   alpha = softmax over the incoming arcs of i
 *   out_i = W_s x_i + b + sum_j alpha (W_v x_j + W_u e)
 */

import { glorot, makeRng, matmul, matmulTransA, matmulTransB, zeros } from "./tensor.js";
import type { GraphSample } from "./loader.js";

export interface ModelConfig {
  hidden: number;
  headHidden: number;
  featureCount: number;
  layers: number;
  normalizeConcat: boolean;
  useFeatures: boolean;
  seed: number;
}

export const DEFAULT_CONFIG: ModelConfig = {
  hidden: 64,
  headHidden: 25,
  featureCount: 10,
  layers: 4,
  normalizeConcat: true,
  useFeatures: true,
  seed: 7,
};

const BN_EPS = 1e-5;
const BN_MOMENTUM = 0.9;

/** One learnable tensor with its gradient accumulator. */
export interface Param {
  value: Float64Array;
  grad: Float64Array;
  name: string;
}

function param(name: string, value: Float64Array): Param {
  return { name, value, grad: new Float64Array(value.length) };
}

interface ConvLayer {
  wq: Param; wk: Param; wv: Param; ws: Param;
  we: Param; wu: Param;
  bias: Param;
  gamma: Param; beta: Param;
  runningMean: Float64Array;
  runningVar: Float64Array;
  inDim: number;
}

interface Norm {
  gamma: Param; beta: Param;
  runningMean: Float64Array;
  runningVar: Float64Array;
}

export interface Batch {
  x: Float64Array;          // [n x 2]
  n: number;
  edgeSrc: Int32Array;
  edgeDst: Int32Array;
  edgeAttr: Float64Array;   // [m x 2]
  m: number;
  graphOf: Int32Array;      // node -> graph
  graphCount: number;
  features: Float64Array;   // [g x featureCount]
  targets: Float64Array;    // [g]
}

export function makeBatch(samples: GraphSample[], zeroFeatures = false): Batch {
  let n = 0;
  let m = 0;
  for (const s of samples) {
    n += s.numNodes;
    m += s.edgeSrc.length;
  }
  const x = new Float64Array(2 * n);
  const edgeSrc = new Int32Array(m);
  const edgeDst = new Int32Array(m);
  const edgeAttr = new Float64Array(2 * m);
  const graphOf = new Int32Array(n);
  const features = new Float64Array(10 * samples.length);
  const targets = new Float64Array(samples.length);
  let nodeBase = 0;
  let edgeBase = 0;
  samples.forEach((s, g) => {
    x.set(s.nodeAttr, 2 * nodeBase);
    for (let i = 0; i < s.numNodes; i++) graphOf[nodeBase + i] = g;
    for (let e = 0; e < s.edgeSrc.length; e++) {
      edgeSrc[edgeBase + e] = s.edgeSrc[e] + nodeBase;
      edgeDst[edgeBase + e] = s.edgeDst[e] + nodeBase;
    }
    edgeAttr.set(s.edgeAttr, 2 * edgeBase);
    if (!zeroFeatures) features.set(s.features, 10 * g);
    targets[g] = s.target;
    nodeBase += s.numNodes;
    edgeBase += s.edgeSrc.length;
  });
  return {
    x, n, edgeSrc, edgeDst, edgeAttr, m,
    graphOf, graphCount: samples.length, features, targets,
  };
}

interface ConvTrace {
  input: Float64Array;
  q: Float64Array; k: Float64Array; v: Float64Array;
  ee: Float64Array; eu: Float64Array;
  alpha: Float64Array;
  pre: Float64Array;
  xhat: Float64Array;
  invStd: Float64Array;
  out: Float64Array;
}

interface PoolTrace {
  pooled: Float64Array;      // [g x (3H + F)]
  argMax: Int32Array;        // [g x H]
  argMin: Int32Array;
  counts: Int32Array;
  normXhat?: Float64Array;
  normInvStd?: Float64Array;
  normed: Float64Array;
}

interface HeadTrace {
  h: Float64Array[];
  preds: Float64Array;
}

export interface ForwardTrace {
  batch: Batch;
  convs: ConvTrace[];
  pool: PoolTrace;
  head: HeadTrace;
}

export class KnotRegressor {
  readonly config: ModelConfig;
  readonly convs: ConvLayer[];
  readonly concatNorm: Norm | null;
  readonly headW: Param[];
  readonly headB: Param[];

  constructor(config: Partial<ModelConfig> = {}) {
    this.config = { ...DEFAULT_CONFIG, ...config };
    const { hidden, layers, headHidden, featureCount } = this.config;
    const rng = makeRng(this.config.seed);
    this.convs = [];
    for (let l = 0; l < layers; l++) {
      const inDim = l === 0 ? 2 : hidden;
      this.convs.push({
        wq: param(`conv${l}.wq`, glorot(inDim, hidden, rng)),
        wk: param(`conv${l}.wk`, glorot(inDim, hidden, rng)),
        wv: param(`conv${l}.wv`, glorot(inDim, hidden, rng)),
        ws: param(`conv${l}.ws`, glorot(inDim, hidden, rng)),
        we: param(`conv${l}.we`, glorot(2, hidden, rng)),
        wu: param(`conv${l}.wu`, glorot(2, hidden, rng)),
        bias: param(`conv${l}.bias`, zeros(hidden)),
        gamma: param(`conv${l}.gamma`, new Float64Array(hidden).fill(1)),
        beta: param(`conv${l}.beta`, zeros(hidden)),
        runningMean: zeros(hidden),
        runningVar: new Float64Array(hidden).fill(1),
        inDim,
      });
    }
    const concatDim = 3 * hidden + featureCount;
    this.concatNorm = this.config.normalizeConcat
      ? {
          gamma: param("norm.gamma", new Float64Array(concatDim).fill(1)),
          beta: param("norm.beta", zeros(concatDim)),
          runningMean: zeros(concatDim),
          runningVar: new Float64Array(concatDim).fill(1),
        }
      : null;
    const dims = [concatDim, headHidden, headHidden, headHidden, 1];
    this.headW = [];
    this.headB = [];
    for (let l = 0; l < 4; l++) {
      this.headW.push(param(`head${l}.w`, glorot(dims[l], dims[l + 1], rng)));
      this.headB.push(param(`head${l}.b`, zeros(dims[l + 1])));
    }
  }

  parameters(): Param[] {
    const out: Param[] = [];
    for (const c of this.convs) {
      out.push(c.wq, c.wk, c.wv, c.ws, c.we, c.wu, c.bias, c.gamma, c.beta);
    }
    if (this.concatNorm) out.push(this.concatNorm.gamma, this.concatNorm.beta);
    out.push(...this.headW, ...this.headB);
    return out;
  }

  zeroGrad(): void {
    for (const p of this.parameters()) p.grad.fill(0);
  }

  // -- forward ------------------------------------------------------------

  private convForward(layer: ConvLayer, x: Float64Array, batch: Batch, training: boolean): ConvTrace {
    const H = this.config.hidden;
    const { n, m, edgeSrc, edgeDst, edgeAttr } = batch;
    const inDim = layer.inDim;
    const q = matmul(x, layer.wq.value, n, inDim, H);
    const k = matmul(x, layer.wk.value, n, inDim, H);
    const v = matmul(x, layer.wv.value, n, inDim, H);
    const skip = matmul(x, layer.ws.value, n, inDim, H);
    const ee = matmul(edgeAttr, layer.we.value, m, 2, H);
    const eu = matmul(edgeAttr, layer.wu.value, m, 2, H);
    const invSqrtH = 1 / Math.sqrt(H);
    const scores = new Float64Array(m);
    for (let e = 0; e < m; e++) {
      const qi = edgeDst[e] * H;
      const kj = edgeSrc[e] * H;
      const er = e * H;
      let dot = 0;
      for (let h = 0; h < H; h++) {
        dot += q[qi + h] * (k[kj + h] + ee[er + h]);
      }
      scores[e] = dot * invSqrtH;
    }
    // softmax over the incoming arcs of each target node
    const maxPerNode = new Float64Array(n).fill(-Infinity);
    for (let e = 0; e < m; e++) {
      const i = edgeDst[e];
      if (scores[e] > maxPerNode[i]) maxPerNode[i] = scores[e];
    }
    const alpha = new Float64Array(m);
    const sumPerNode = new Float64Array(n);
    for (let e = 0; e < m; e++) {
      const value = Math.exp(scores[e] - maxPerNode[edgeDst[e]]);
      alpha[e] = value;
      sumPerNode[edgeDst[e]] += value;
    }
    for (let e = 0; e < m; e++) {
      alpha[e] /= sumPerNode[edgeDst[e]];
    }
    const pre = skip; // reuse: skip + aggregation + bias
    for (let e = 0; e < m; e++) {
      const dst = edgeDst[e] * H;
      const src = edgeSrc[e] * H;
      const er = e * H;
      const a = alpha[e];
      for (let h = 0; h < H; h++) {
        pre[dst + h] += a * (v[src + h] + eu[er + h]);
      }
    }
    for (let i = 0; i < n; i++) {
      const row = i * H;
      for (let h = 0; h < H; h++) pre[row + h] += layer.bias.value[h];
    }
    // batch normalization over the node dimension
    const xhat = new Float64Array(n * H);
    const invStd = new Float64Array(H);
    const out = new Float64Array(n * H);
    const mean = new Float64Array(H);
    const variance = new Float64Array(H);
    if (training) {
      for (let i = 0; i < n; i++) {
        const row = i * H;
        for (let h = 0; h < H; h++) mean[h] += pre[row + h];
      }
      for (let h = 0; h < H; h++) mean[h] /= n;
      for (let i = 0; i < n; i++) {
        const row = i * H;
        for (let h = 0; h < H; h++) {
          const d = pre[row + h] - mean[h];
          variance[h] += d * d;
        }
      }
      for (let h = 0; h < H; h++) {
        variance[h] /= n;
        layer.runningMean[h] = BN_MOMENTUM * layer.runningMean[h] + (1 - BN_MOMENTUM) * mean[h];
        layer.runningVar[h] = BN_MOMENTUM * layer.runningVar[h] + (1 - BN_MOMENTUM) * variance[h];
      }
    } else {
      mean.set(layer.runningMean);
      variance.set(layer.runningVar);
    }
    for (let h = 0; h < H; h++) invStd[h] = 1 / Math.sqrt(variance[h] + BN_EPS);
    for (let i = 0; i < n; i++) {
      const row = i * H;
      for (let h = 0; h < H; h++) {
        const normed = (pre[row + h] - mean[h]) * invStd[h];
        xhat[row + h] = normed;
        out[row + h] = Math.tanh(layer.gamma.value[h] * normed + layer.beta.value[h]);
      }
    }
    return { input: x, q, k, v, ee, eu, alpha, pre, xhat, invStd, out };
  }

  private poolForward(nodeStates: Float64Array, batch: Batch, training: boolean): PoolTrace {
    const H = this.config.hidden;
    const F = this.config.featureCount;
    const g = batch.graphCount;
    const width = 3 * H + F;
    const pooled = new Float64Array(g * width);
    const argMax = new Int32Array(g * H).fill(-1);
    const argMin = new Int32Array(g * H).fill(-1);
    const counts = new Int32Array(g);
    const maxVal = new Float64Array(g * H).fill(-Infinity);
    const minVal = new Float64Array(g * H).fill(Infinity);
    for (let i = 0; i < batch.n; i++) {
      const graph = batch.graphOf[i];
      counts[graph]++;
      const row = i * H;
      const base = graph * width;
      const gh = graph * H;
      for (let h = 0; h < H; h++) {
        const value = nodeStates[row + h];
        pooled[base + h] += value; // mean slot, divided below
        if (value > maxVal[gh + h]) {
          maxVal[gh + h] = value;
          argMax[gh + h] = i;
        }
        if (value < minVal[gh + h]) {
          minVal[gh + h] = value;
          argMin[gh + h] = i;
        }
      }
    }
    for (let graph = 0; graph < g; graph++) {
      const base = graph * width;
      const gh = graph * H;
      for (let h = 0; h < H; h++) {
        pooled[base + h] /= counts[graph];
        pooled[base + H + h] = maxVal[gh + h];
        pooled[base + 2 * H + h] = minVal[gh + h];
      }
      for (let f = 0; f < F; f++) {
        pooled[base + 3 * H + f] = batch.features[graph * F + f];
      }
    }
    if (!this.concatNorm) {
      return { pooled, argMax, argMin, counts, normed: pooled };
    }
    const norm = this.concatNorm;
    const mean = new Float64Array(width);
    const variance = new Float64Array(width);
    if (training) {
      for (let graph = 0; graph < g; graph++) {
        const base = graph * width;
        for (let c = 0; c < width; c++) mean[c] += pooled[base + c];
      }
      for (let c = 0; c < width; c++) mean[c] /= g;
      for (let graph = 0; graph < g; graph++) {
        const base = graph * width;
        for (let c = 0; c < width; c++) {
          const d = pooled[base + c] - mean[c];
          variance[c] += d * d;
        }
      }
      for (let c = 0; c < width; c++) {
        variance[c] /= g;
        norm.runningMean[c] = BN_MOMENTUM * norm.runningMean[c] + (1 - BN_MOMENTUM) * mean[c];
        norm.runningVar[c] = BN_MOMENTUM * norm.runningVar[c] + (1 - BN_MOMENTUM) * variance[c];
      }
    } else {
      mean.set(norm.runningMean);
      variance.set(norm.runningVar);
    }
    const invStd = new Float64Array(width);
    for (let c = 0; c < width; c++) invStd[c] = 1 / Math.sqrt(variance[c] + BN_EPS);
    const xhat = new Float64Array(g * width);
    const normed = new Float64Array(g * width);
    for (let graph = 0; graph < g; graph++) {
      const base = graph * width;
      for (let c = 0; c < width; c++) {
        const value = (pooled[base + c] - mean[c]) * invStd[c];
        xhat[base + c] = value;
        normed[base + c] = norm.gamma.value[c] * value + norm.beta.value[c];
      }
    }
    return { pooled, argMax, argMin, counts, normXhat: xhat, normInvStd: invStd, normed };
  }

  private headForward(z: Float64Array, g: number): HeadTrace {
    const dims = [z.length / g, this.config.headHidden, this.config.headHidden, this.config.headHidden, 1];
    const h: Float64Array[] = [z];
    let current = z;
    for (let l = 0; l < 4; l++) {
      const next = matmul(current, this.headW[l].value, g, dims[l], dims[l + 1]);
      for (let i = 0; i < g; i++) {
        const row = i * dims[l + 1];
        for (let j = 0; j < dims[l + 1]; j++) {
          next[row + j] += this.headB[l].value[j];
          if (l < 3) next[row + j] = Math.tanh(next[row + j]);
        }
      }
      h.push(next);
      current = next;
    }
    return { h, preds: h[4] };
  }

  forward(batch: Batch, training: boolean): ForwardTrace {
    const convs: ConvTrace[] = [];
    let state = batch.x;
    for (const layer of this.convs) {
      const trace = this.convForward(layer, state, batch, training);
      convs.push(trace);
      state = trace.out;
    }
    const pool = this.poolForward(state, batch, training);
    const head = this.headForward(pool.normed, batch.graphCount);
    return { batch, convs, pool, head };
  }

  predict(batch: Batch): Float64Array {
    return this.forward(batch, false).head.preds;
  }

  // -- backward -----------------------------------------------------------

  /** Mean absolute error and parameter gradients for one batch. */
  lossAndGrad(batch: Batch): number {
    const trace = this.forward(batch, true);
    const g = batch.graphCount;
    const preds = trace.head.preds;
    let loss = 0;
    const dPred = new Float64Array(g);
    for (let i = 0; i < g; i++) {
      const r = preds[i] - batch.targets[i];
      loss += Math.abs(r);
      dPred[i] = Math.sign(r) / g;
    }
    loss /= g;
    this.backward(trace, dPred);
    return loss;
  }

  backward(trace: ForwardTrace, dPred: Float64Array): void {
    const { batch } = trace;
    const g = batch.graphCount;
    const H = this.config.hidden;
    const F = this.config.featureCount;
    const width = 3 * H + F;
    const dims = [width, this.config.headHidden, this.config.headHidden, this.config.headHidden, 1];
    // head
    // dCurrent holds the gradient w.r.t. layer l's pre-activation by the
    // time layer l is processed (the tanh factor is applied on the way in)
    let dCurrent = new Float64Array(dPred); // [g x 1]
    for (let l = 3; l >= 0; l--) {
      const input = trace.head.h[l];
      const dOut = dCurrent;
      for (let i = 0; i < g; i++) {
        for (let j = 0; j < dims[l + 1]; j++) {
          this.headB[l].grad[j] += dOut[i * dims[l + 1] + j];
        }
      }
      matmulTransA(input, dOut, g, dims[l], dims[l + 1], this.headW[l].grad);
      const dIn = new Float64Array(g * dims[l]);
      matmulTransB(dOut, this.headW[l].value, g, dims[l], dims[l + 1], dIn);
      if (l > 0) {
        // input = tanh(pre); propagate through the activation
        for (let i = 0; i < dIn.length; i++) {
          dIn[i] *= 1 - input[i] * input[i];
        }
      }
      dCurrent = dIn;
    }
    // concat normalization
    let dPooled: Float64Array;
    if (this.concatNorm) {
      const norm = this.concatNorm;
      const xhat = trace.pool.normXhat!;
      const invStd = trace.pool.normInvStd!;
      const dXhat = new Float64Array(g * width);
      for (let i = 0; i < g; i++) {
        const base = i * width;
        for (let c = 0; c < width; c++) {
          const dy = dCurrent[base + c];
          norm.gamma.grad[c] += dy * xhat[base + c];
          norm.beta.grad[c] += dy;
          dXhat[base + c] = dy * norm.gamma.value[c];
        }
      }
      dPooled = new Float64Array(g * width);
      const meanDXhat = new Float64Array(width);
      const meanDXhatXhat = new Float64Array(width);
      for (let i = 0; i < g; i++) {
        const base = i * width;
        for (let c = 0; c < width; c++) {
          meanDXhat[c] += dXhat[base + c];
          meanDXhatXhat[c] += dXhat[base + c] * xhat[base + c];
        }
      }
      for (let c = 0; c < width; c++) {
        meanDXhat[c] /= g;
        meanDXhatXhat[c] /= g;
      }
      for (let i = 0; i < g; i++) {
        const base = i * width;
        for (let c = 0; c < width; c++) {
          dPooled[base + c] =
            invStd[c] * (dXhat[base + c] - meanDXhat[c] - xhat[base + c] * meanDXhatXhat[c]);
        }
      }
    } else {
      dPooled = dCurrent;
    }
    // pooling -> node states
    const n = batch.n;
    const dState = new Float64Array(n * H);
    for (let i = 0; i < n; i++) {
      const graph = batch.graphOf[i];
      const base = graph * width;
      const row = i * H;
      const count = trace.pool.counts[graph];
      for (let h = 0; h < H; h++) {
        dState[row + h] += dPooled[base + h] / count;
      }
    }
    for (let graph = 0; graph < g; graph++) {
      const base = graph * width;
      const gh = graph * H;
      for (let h = 0; h < H; h++) {
        dState[trace.pool.argMax[gh + h] * H + h] += dPooled[base + H + h];
        dState[trace.pool.argMin[gh + h] * H + h] += dPooled[base + 2 * H + h];
      }
    }
    // conv stack in reverse
    let dOut: Float64Array = dState;
    for (let l = this.convs.length - 1; l >= 0; l--) {
      dOut = this.convBackward(this.convs[l], trace.convs[l], batch, dOut);
    }
  }

  private convBackward(
    layer: ConvLayer, trace: ConvTrace, batch: Batch, dOut: Float64Array,
  ): Float64Array {
    const H = this.config.hidden;
    const { n, m, edgeSrc, edgeDst, edgeAttr } = batch;
    const inDim = layer.inDim;
    // tanh and affine BN output
    const dXhat = new Float64Array(n * H);
    for (let i = 0; i < n; i++) {
      const row = i * H;
      for (let h = 0; h < H; h++) {
        const y = trace.out[row + h];
        const dy = dOut[row + h] * (1 - y * y);
        layer.gamma.grad[h] += dy * trace.xhat[row + h];
        layer.beta.grad[h] += dy;
        dXhat[row + h] = dy * layer.gamma.value[h];
      }
    }
    // batch-statistics normalization backward
    const dPre = new Float64Array(n * H);
    const meanDXhat = new Float64Array(H);
    const meanDXhatXhat = new Float64Array(H);
    for (let i = 0; i < n; i++) {
      const row = i * H;
      for (let h = 0; h < H; h++) {
        meanDXhat[h] += dXhat[row + h];
        meanDXhatXhat[h] += dXhat[row + h] * trace.xhat[row + h];
      }
    }
    for (let h = 0; h < H; h++) {
      meanDXhat[h] /= n;
      meanDXhatXhat[h] /= n;
    }
    for (let i = 0; i < n; i++) {
      const row = i * H;
      for (let h = 0; h < H; h++) {
        dPre[row + h] = trace.invStd[h]
          * (dXhat[row + h] - meanDXhat[h] - trace.xhat[row + h] * meanDXhatXhat[h]);
      }
    }
    // bias and skip
    for (let i = 0; i < n; i++) {
      const row = i * H;
      for (let h = 0; h < H; h++) layer.bias.grad[h] += dPre[row + h];
    }
    const dX = new Float64Array(n * inDim);
    matmulTransA(trace.input, dPre, n, inDim, H, layer.ws.grad);
    matmulTransB(dPre, layer.ws.value, n, inDim, H, dX);
    // aggregation backward
    const invSqrtH = 1 / Math.sqrt(H);
    const dAlpha = new Float64Array(m);
    const dV = new Float64Array(n * H);
    const dEu = new Float64Array(m * H);
    for (let e = 0; e < m; e++) {
      const dst = edgeDst[e] * H;
      const src = edgeSrc[e] * H;
      const er = e * H;
      const a = trace.alpha[e];
      let dotDAgg = 0;
      for (let h = 0; h < H; h++) {
        const dAgg = dPre[dst + h];
        dotDAgg += dAgg * (trace.v[src + h] + trace.eu[er + h]);
        dV[src + h] += a * dAgg;
        dEu[er + h] = a * dAgg;
      }
      dAlpha[e] = dotDAgg;
    }
    // softmax backward per target node
    const weightedSum = new Float64Array(n);
    for (let e = 0; e < m; e++) {
      weightedSum[edgeDst[e]] += trace.alpha[e] * dAlpha[e];
    }
    const dQ = new Float64Array(n * H);
    const dK = new Float64Array(n * H);
    const dEe = new Float64Array(m * H);
    for (let e = 0; e < m; e++) {
      const dScore = trace.alpha[e] * (dAlpha[e] - weightedSum[edgeDst[e]]) * invSqrtH;
      if (dScore === 0) continue;
      const dst = edgeDst[e] * H;
      const src = edgeSrc[e] * H;
      const er = e * H;
      for (let h = 0; h < H; h++) {
        dQ[dst + h] += dScore * (trace.k[src + h] + trace.ee[er + h]);
        dK[src + h] += dScore * trace.q[dst + h];
        dEe[er + h] += dScore * trace.q[dst + h];
      }
    }
    matmulTransA(trace.input, dQ, n, inDim, H, layer.wq.grad);
    matmulTransB(dQ, layer.wq.value, n, inDim, H, dX);
    matmulTransA(trace.input, dK, n, inDim, H, layer.wk.grad);
    matmulTransB(dK, layer.wk.value, n, inDim, H, dX);
    matmulTransA(trace.input, dV, n, inDim, H, layer.wv.grad);
    matmulTransB(dV, layer.wv.value, n, inDim, H, dX);
    matmulTransA(edgeAttr, dEe, m, 2, H, layer.we.grad);
    matmulTransA(edgeAttr, dEu, m, 2, H, layer.wu.grad);
    return dX;
  }
}
