/**
 * Training loop and evaluation for the knot-graph regressor.
 *
 * Loss is mean absolute error, optimized with Adam at learning rate 0.001.
 * Per-epoch train and validation MAE are recorded; the parameters of the
 * best validation epoch are kept.  Discrete targets are scored as accuracy
 * after rounding predictions to the nearest valid value, continuous ones
 * as mean absolute distance.
 */

import type { GraphSample } from "./loader.js";
import { KnotRegressor, makeBatch, type ModelConfig, type Param } from "./model.js";
import { makeRng, shuffleIndices } from "./tensor.js";

export interface TrainConfig {
  learningRate: number;
  epochs: number;
  batchSize: number;
  seed: number;
  zeroFeatures: boolean;
}

export const DEFAULT_TRAIN: TrainConfig = {
  learningRate: 0.001,
  epochs: 50,
  batchSize: 32,
  seed: 1,
  zeroFeatures: false,
};

export interface EpochStats {
  epoch: number;
  trainMae: number;
  valMae: number;
}

export interface TrainResult {
  model: KnotRegressor;
  history: EpochStats[];
  bestEpoch: number;
  bestValMae: number;
}

class Adam {
  private readonly m: Float64Array[];
  private readonly v: Float64Array[];
  private step = 0;

  constructor(
    private readonly params: Param[],
    private readonly lr: number,
    private readonly beta1 = 0.9,
    private readonly beta2 = 0.999,
    private readonly eps = 1e-8,
  ) {
    this.m = params.map((p) => new Float64Array(p.value.length));
    this.v = params.map((p) => new Float64Array(p.value.length));
  }

  update(): void {
    this.step++;
    const correction1 = 1 - Math.pow(this.beta1, this.step);
    const correction2 = 1 - Math.pow(this.beta2, this.step);
    for (let k = 0; k < this.params.length; k++) {
      const { value, grad } = this.params[k];
      const m = this.m[k];
      const v = this.v[k];
      for (let i = 0; i < value.length; i++) {
        m[i] = this.beta1 * m[i] + (1 - this.beta1) * grad[i];
        v[i] = this.beta2 * v[i] + (1 - this.beta2) * grad[i] * grad[i];
        const mhat = m[i] / correction1;
        const vhat = v[i] / correction2;
        value[i] -= (this.lr * mhat) / (Math.sqrt(vhat) + this.eps);
      }
    }
  }
}

export function meanAbsoluteError(model: KnotRegressor, samples: GraphSample[], zeroFeatures = false): number {
  if (samples.length === 0) return NaN;
  let total = 0;
  for (const sample of samples) {
    const batch = makeBatch([sample], zeroFeatures);
    const pred = model.predict(batch)[0];
    total += Math.abs(pred - sample.target);
  }
  return total / samples.length;
}

/** MAE of always predicting the train-split mean target. */
export function meanPredictorBaseline(train: GraphSample[], evaluation: GraphSample[]): number {
  const mean = train.reduce((acc, s) => acc + s.target, 0) / train.length;
  return evaluation.reduce((acc, s) => acc + Math.abs(s.target - mean), 0) / evaluation.length;
}

export function train(
  trainSamples: GraphSample[],
  valSamples: GraphSample[],
  modelConfig: Partial<ModelConfig> = {},
  trainConfig: Partial<TrainConfig> = {},
): TrainResult {
  const cfg = { ...DEFAULT_TRAIN, ...trainConfig };
  const model = new KnotRegressor(modelConfig);
  const optimizer = new Adam(model.parameters(), cfg.learningRate);
  const rng = makeRng(cfg.seed ^ 0x9e3779b9);
  const order = new Int32Array(trainSamples.length);
  for (let i = 0; i < order.length; i++) order[i] = i;
  const history: EpochStats[] = [];
  let bestEpoch = -1;
  let bestValMae = Infinity;
  let bestParams: Float64Array[] | null = null;
  for (let epoch = 1; epoch <= cfg.epochs; epoch++) {
    shuffleIndices(order, rng);
    let epochLoss = 0;
    let batches = 0;
    for (let start = 0; start < order.length; start += cfg.batchSize) {
      const slice = [];
      for (let i = start; i < Math.min(start + cfg.batchSize, order.length); i++) {
        slice.push(trainSamples[order[i]]);
      }
      const batch = makeBatch(slice, cfg.zeroFeatures);
      model.zeroGrad();
      const loss = model.lossAndGrad(batch);
      if (!Number.isFinite(loss)) {
        throw new Error(`training diverged: non-finite loss at epoch ${epoch}`);
      }
      optimizer.update();
      epochLoss += loss;
      batches++;
    }
    const trainMae = epochLoss / batches;
    const valMae = meanAbsoluteError(model, valSamples, cfg.zeroFeatures);
    history.push({ epoch, trainMae, valMae });
    if (valMae < bestValMae) {
      bestValMae = valMae;
      bestEpoch = epoch;
      bestParams = model.parameters().map((p) => Float64Array.from(p.value));
    }
  }
  if (bestParams) {
    model.parameters().forEach((p, i) => p.value.set(bestParams![i]));
  }
  return { model, history, bestEpoch, bestValMae };
}

export type TargetKind = "continuous" | "integer" | "odd-integer" | "even-integer" | "pm1";

export const TARGET_KINDS: Record<string, TargetKind> = {
  volume: "continuous",
  determinant: "odd-integer",
  signature: "even-integer",
  rasmussen_s: "even-integer",
  tau: "integer",
  q_positivity: "pm1",
};

export function roundToValid(value: number, kind: TargetKind): number {
  switch (kind) {
    case "continuous":
      return value;
    case "integer":
      return Math.round(value);
    case "odd-integer":
      return 2 * Math.round((value - 1) / 2) + 1;
    case "even-integer":
      return 2 * Math.round(value / 2);
    case "pm1":
      return value >= 0 ? 1 : -1;
  }
}

export interface Evaluation {
  kind: TargetKind;
  mae: number;
  accuracy: number | null;
  count: number;
}

/** Anything that maps a batch to one prediction per graph. */
export interface Predictor {
  predict(batch: ReturnType<typeof makeBatch>): Float64Array;
}

export function evaluate(
  model: Predictor,
  samples: GraphSample[],
  targetName: string,
  zeroFeatures = false,
): Evaluation {
  const kind = TARGET_KINDS[targetName];
  if (!kind) throw new Error(`unknown target kind for ${targetName}`);
  let absolute = 0;
  let hits = 0;
  for (const sample of samples) {
    const pred = model.predict(makeBatch([sample], zeroFeatures))[0];
    absolute += Math.abs(pred - sample.target);
    if (kind !== "continuous" && roundToValid(pred, kind) === sample.target) hits++;
  }
  return {
    kind,
    mae: absolute / samples.length,
    accuracy: kind === "continuous" ? null : hits / samples.length,
    count: samples.length,
  };
}
