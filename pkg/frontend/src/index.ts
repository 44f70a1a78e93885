/**
 * Typed client for the coresample CLI.
 *
 * Every call validates the in-memory arrays, writes them to a temporary
 * CSV, drives one CLI subcommand, and parses the JSON/CSV the CLI emits.
 * All numeric computation happens in the primary package; nothing is
 * reimplemented here. Calls are async, so the event loop stays free while
 * the CLI computes. Shapes mirror the CLI wire formats verbatim.
 */

import { mkdtemp, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { parseCsv, writeCsv } from "./csv.js";
import { DEFAULT_CLI, CliError, runCli } from "./runner.js";

export { CliError } from "./runner.js";

/** Mirrors the primary component's version string. */
export const VERSION = "0.1.0";

export type NormOrder = number | "inf";

export interface CommonOptions {
  /** CLI argv prefix, e.g. ["python3", "-m", "coresample.cli"]. */
  cli?: string[];
  k?: number;
  p?: NormOrder;
  alpha?: number;
  normalize?: "off" | "zscore";
  lenient?: boolean;
  seed?: number;
}

export interface ResampleOptions extends CommonOptions {
  compression?: number;
  oversampleTarget?: number | "balance-to-majority";
  strategy?: "interpolate" | "duplicate";
  removalPolicy?: "random" | "densest-first";
}

export interface SweepOptions extends ResampleOptions {
  testFraction?: number;
}

/** One class's split, as serialized by `coresample partition`. */
export interface PartitionClass {
  label: string;
  threshold: number | null;
  alpha: number;
  n_core: number;
  n_border: number;
  core_ids: number[];
  border_ids: number[];
}

export interface ResampledDataset {
  features: number[][];
  labels: string[];
  provenance: ("original" | "synthetic")[];
}

export interface SweepRow {
  compression: number;
  n_train_after: number;
  metrics: Record<
    string,
    { accuracy: number; precision: number; recall: number; f1: number }
  >;
}

export interface SweepReport {
  experiment: "sweep";
  config: Record<string, unknown>;
  rows: SweepRow[];
}

export function validateDataset(features: number[][], labels: string[]): void {
  if (!Array.isArray(features) || !Array.isArray(labels)) {
    throw new TypeError("features and labels must be arrays");
  }
  if (features.length === 0) {
    throw new RangeError("dataset must contain at least one row");
  }
  if (labels.length !== features.length) {
    throw new RangeError(
      `labels length ${labels.length} does not match ${features.length} rows`,
    );
  }
  const width = Array.isArray(features[0]) ? features[0].length : -1;
  if (width < 1) {
    throw new TypeError("each feature row must be a non-empty numeric array");
  }
  for (const row of features) {
    if (!Array.isArray(row) || row.length !== width) {
      throw new TypeError("feature rows must be rectangular");
    }
    for (const value of row) {
      if (typeof value !== "number" || !Number.isFinite(value)) {
        throw new TypeError(`feature values must be finite numbers, got ${value}`);
      }
    }
  }
  for (const label of labels) {
    if (typeof label !== "string") {
      throw new TypeError(`labels must be strings, got ${typeof label}`);
    }
  }
}

function datasetToCsv(features: number[][], labels: string[]): string {
  const header = [...features[0].map((_, j) => `f${j}`), "label"];
  const rows = features.map((row, i) => [...row.map((v) => String(v)), labels[i]]);
  return writeCsv([header, ...rows]);
}

function optionFlags(opts: CommonOptions & ResampleOptions & SweepOptions): string[] {
  const flags: string[] = [];
  const push = (flag: string, value: unknown) => {
    if (value !== undefined) flags.push(flag, String(value));
  };
  push("--k", opts.k);
  push("--p", opts.p);
  push("--alpha", opts.alpha);
  push("--normalize", opts.normalize);
  push("--seed", opts.seed);
  push("--compression", opts.compression);
  push("--oversample-target", opts.oversampleTarget);
  push("--strategy", opts.strategy);
  push("--removal-policy", opts.removalPolicy);
  push("--test-fraction", opts.testFraction);
  if (opts.lenient) flags.push("--lenient");
  return flags;
}

async function withDatasetCsv<T>(
  features: number[][],
  labels: string[],
  body: (inputPath: string) => Promise<T>,
): Promise<T> {
  validateDataset(features, labels);
  const dir = await mkdtemp(join(tmpdir(), "coresample-"));
  try {
    const inputPath = join(dir, "input.csv");
    await writeFile(inputPath, datasetToCsv(features, labels), "utf8");
    return await body(inputPath);
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}

function parseResampledCsv(text: string): ResampledDataset {
  const rows = parseCsv(text);
  const header = rows[0];
  const labelIdx = header.indexOf("label");
  const provenanceIdx = header.indexOf("provenance");
  const featureIdx = header
    .map((_, j) => j)
    .filter((j) => j !== labelIdx && j !== provenanceIdx);
  const out: ResampledDataset = { features: [], labels: [], provenance: [] };
  for (const row of rows.slice(1)) {
    out.features.push(featureIdx.map((j) => Number(row[j])));
    out.labels.push(row[labelIdx]);
    out.provenance.push(row[provenanceIdx] as "original" | "synthetic");
  }
  return out;
}

/** Core/border split per class; identical to `coresample partition`. */
export async function partition(
  features: number[][],
  labels: string[],
  opts: CommonOptions = {},
): Promise<PartitionClass[]> {
  return withDatasetCsv(features, labels, async (inputPath) => {
    const stdout = await runCli(
      ["partition", "--input", inputPath, ...optionFlags(opts)],
      opts.cli ?? DEFAULT_CLI,
    );
    return (JSON.parse(stdout) as { classes: PartitionClass[] }).classes;
  });
}

async function resampleCommand(
  command: string,
  features: number[][],
  labels: string[],
  classLabel: string | undefined,
  opts: ResampleOptions,
): Promise<ResampledDataset> {
  return withDatasetCsv(features, labels, async (inputPath) => {
    const args = [command, "--input", inputPath, "--provenance", ...optionFlags(opts)];
    if (classLabel !== undefined) args.push("--class-label", classLabel);
    const stdout = await runCli(args, opts.cli ?? DEFAULT_CLI);
    return parseResampledCsv(stdout);
  });
}

/** Grow one class (default: the minority) from its border points only. */
export async function oversampleBorder(
  features: number[][],
  labels: string[],
  classLabel?: string,
  opts: ResampleOptions = {},
): Promise<ResampledDataset> {
  return resampleCommand("oversample", features, labels, classLabel, opts);
}

/** Prune one class (default: the majority), core points first. */
export async function downsampleCore(
  features: number[][],
  labels: string[],
  classLabel?: string,
  opts: ResampleOptions = {},
): Promise<ResampledDataset> {
  return resampleCommand("downsample", features, labels, classLabel, opts);
}

/** Downsample the majority core and oversample the minority border. */
export async function hybridResample(
  features: number[][],
  labels: string[],
  opts: ResampleOptions = {},
): Promise<ResampledDataset> {
  return resampleCommand("hybrid", features, labels, undefined, opts);
}

/** Accuracy-vs-compression sweep; returns the CLI's JSON report. */
export async function compressionSweep(
  features: number[][],
  labels: string[],
  levels: number[],
  opts: SweepOptions = {},
): Promise<SweepReport> {
  if (levels.length === 0) {
    throw new RangeError("levels must be non-empty");
  }
  return withDatasetCsv(features, labels, async (inputPath) => {
    const args = [
      "sweep",
      "--input",
      inputPath,
      "--levels",
      levels.join(","),
      ...optionFlags(opts),
    ];
    const stdout = await runCli(args, opts.cli ?? DEFAULT_CLI);
    return JSON.parse(stdout) as SweepReport;
  });
}

/** Version string reported by the installed CLI. */
export async function cliVersion(opts: CommonOptions = {}): Promise<string> {
  const stdout = await runCli(["--version"], opts.cli ?? DEFAULT_CLI);
  return stdout.trim().replace(/^coresample\s+/, "");
}
