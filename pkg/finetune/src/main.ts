/**
 * CLI: fine-tune the backbone on a dataset pair and export second-last
 * layer activations as FVEC files for the adaptation library.
 *
 * Data comes either from --synth (the seeded toy generator) or from
 * --source-dir/--target-dir image folders (one subdirectory per class).
 * --config points at a JSON file mirroring the FinetuneConfig field names.
 */

import * as fs from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { genSyntheticImages, loadImageFolder, TargetData } from "./data";
import { writeFvec, writeLabels } from "./fvec";
import {
  buildToyModel,
  DEFAULT_CONFIG,
  extractFeatures,
  FinetuneConfig,
  ftPhase,
  lpPhase,
} from "./model";

function loadConfig(path?: string): FinetuneConfig {
  if (!path) {
    return { ...DEFAULT_CONFIG };
  }
  const raw = JSON.parse(fs.readFileSync(path, "utf-8"));
  const cfg = { ...DEFAULT_CONFIG, ...raw };
  if (cfg.lp_epochs < 1 || cfg.ft_epochs < 1) {
    throw new Error("epochs must be >= 1");
  }
  if (cfg.lr_lp <= 0 || cfg.lr_ft <= 0) {
    throw new Error("learning rates must be > 0");
  }
  if (cfg.mode !== "source-only" && cfg.mode !== "source-target") {
    throw new Error(`unknown mode ${cfg.mode}`);
  }
  return cfg;
}

export async function run(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .option("config", { type: "string", describe: "JSON config file" })
    .option("synth", { type: "boolean", default: false, describe: "use the synthetic toy dataset" })
    .option("synth-classes", { type: "number", default: 4 })
    .option("synth-per-class", { type: "number", default: 40 })
    .option("source-dir", { type: "string", describe: "source image folder" })
    .option("target-dir", { type: "string", describe: "target image folder" })
    .option("out-prefix", { type: "string", demandOption: true })
    .strict()
    .parse();

  const cfg = loadConfig(args.config);

  let source;
  let target;
  if (args.synth) {
    source = genSyntheticImages(cfg.seed, args["synth-per-class"], args["synth-classes"], "source");
    target = genSyntheticImages(cfg.seed, args["synth-per-class"], args["synth-classes"], "target");
  } else {
    if (!args["source-dir"] || !args["target-dir"]) {
      throw new Error("need --synth or both --source-dir and --target-dir");
    }
    source = loadImageFolder(args["source-dir"]);
    target = loadImageFolder(args["target-dir"]);
    if (source.numClasses !== target.numClasses) {
      throw new Error("source and target class counts differ");
    }
  }

  const harness = buildToyModel(source.numClasses, cfg.seed);
  const lpRecords = lpPhase(harness, source, cfg);
  for (const r of lpRecords) {
    console.log(`epoch ${r.epoch} [lp] lr=${r.learningRate} loss=${r.loss.toFixed(4)}`);
  }
  const ftRecords = ftPhase(
    harness, source, cfg.mode === "source-target" ? new TargetData(target) : null, cfg,
  );
  for (const r of ftRecords) {
    const sel = r.selectedPerClass ? ` selected=[${r.selectedPerClass}]` : "";
    console.log(`epoch ${r.epoch} [ft] lr=${r.learningRate} loss=${r.loss.toFixed(4)}${sel}`);
  }

  const prefix = args["out-prefix"];
  const srcFeats = extractFeatures(harness, source.images, source.labels.length);
  writeFvec(srcFeats.data, srcFeats.rows, srcFeats.cols, `${prefix}_source.fvec`);
  writeLabels(source.labels, `${prefix}_source.labels`);
  const tgtFeats = extractFeatures(harness, target.images, target.labels.length);
  writeFvec(tgtFeats.data, tgtFeats.rows, tgtFeats.cols, `${prefix}_target.fvec`);
  writeLabels(target.labels, `${prefix}_target.labels`);
  console.log(`wrote ${prefix}_{source,target}.{fvec,labels}`);
  return 0;
}

if (require.main === module) {
  run(hideBin(process.argv))
    .then((code) => process.exit(code))
    .catch((err) => {
      console.error(`error: ${err.message}`);
      process.exit(1);
    });
}
