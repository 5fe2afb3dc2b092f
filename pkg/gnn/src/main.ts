/**
 * Train on a JSONL corpus and write a metrics report plus history CSV.
 *
 * Usage:
 *   node dist/main.js --data corpus.jsonl [--manifest corpus.jsonl.manifest.json]
 *        [--epochs 50] [--hidden 64] [--batch 32] [--seed 1] [--no-features]
 *        [--out metrics.json] [--history history.csv]
 */

import { writeFileSync } from "node:fs";
import { loadCorpus, loadManifest, splitByManifest } from "./loader.js";
import { evaluate, meanPredictorBaseline, train } from "./train.js";

interface Args {
  data: string;
  manifest: string;
  epochs: number;
  hidden: number;
  batch: number;
  seed: number;
  out: string;
  history: string;
  useFeatures: boolean;
}

function parseArgs(argv: string[]): Args {
  const args: Args = {
    data: "",
    manifest: "",
    epochs: 50,
    hidden: 64,
    batch: 32,
    seed: 1,
    out: "metrics.json",
    history: "history.csv",
    useFeatures: true,
  };
  for (let i = 0; i < argv.length; i++) {
    switch (argv[i]) {
      case "--data": args.data = argv[++i]; break;
      case "--manifest": args.manifest = argv[++i]; break;
      case "--epochs": args.epochs = Number(argv[++i]); break;
      case "--hidden": args.hidden = Number(argv[++i]); break;
      case "--batch": args.batch = Number(argv[++i]); break;
      case "--seed": args.seed = Number(argv[++i]); break;
      case "--out": args.out = argv[++i]; break;
      case "--history": args.history = argv[++i]; break;
      case "--no-features": args.useFeatures = false; break;
      default:
        throw new Error(`unknown flag ${argv[i]}`);
    }
  }
  if (!args.data) throw new Error("--data is required");
  if (!args.manifest) args.manifest = `${args.data}.manifest.json`;
  return args;
}

function main(): void {
  const args = parseArgs(process.argv.slice(2));
  const dataset = loadCorpus(args.data);
  const manifest = loadManifest(args.manifest);
  const { train: trainSamples, test: testSamples } = splitByManifest(dataset, manifest);
  console.log(
    `loaded ${dataset.samples.length} samples (${trainSamples.length} train / ` +
    `${testSamples.length} test), target=${dataset.targetName}`,
  );
  const started = Date.now();
  const result = train(
    trainSamples,
    testSamples,
    { hidden: args.hidden, useFeatures: args.useFeatures, seed: args.seed },
    {
      epochs: args.epochs,
      batchSize: args.batch,
      seed: args.seed,
      zeroFeatures: !args.useFeatures,
    },
  );
  const seconds = (Date.now() - started) / 1000;
  const testEval = evaluate(result.model, testSamples, dataset.targetName, !args.useFeatures);
  const baseline = meanPredictorBaseline(trainSamples, testSamples);
  const metrics = {
    target: dataset.targetName,
    train_samples: trainSamples.length,
    test_samples: testSamples.length,
    epochs: args.epochs,
    seconds,
    best_epoch: result.bestEpoch,
    best_val_mae: result.bestValMae,
    final_train_mae: result.history[result.history.length - 1].trainMae,
    test_mae: testEval.mae,
    test_accuracy: testEval.accuracy,
    baseline_mae: baseline,
  };
  writeFileSync(args.out, JSON.stringify(metrics, null, 2) + "\n");
  const rows = ["epoch,train_mae,val_mae"];
  for (const h of result.history) {
    rows.push(`${h.epoch},${h.trainMae},${h.valMae}`);
  }
  writeFileSync(args.history, rows.join("\n") + "\n");
  console.log(JSON.stringify(metrics, null, 2));
}

main();
