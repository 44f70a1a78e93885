import { mkdtemp, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import {
  CliError,
  cliVersion,
  compressionSweep,
  downsampleCore,
  hybridResample,
  oversampleBorder,
  partition,
  VERSION,
  type PartitionClass,
} from "../src/index.js";
import { runCli } from "../src/runner.js";

/** Deterministic PRNG so every run checks the same 20 shared datasets. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function gaussian(rand: () => number): number {
  return Math.sqrt(-2 * Math.log(1 - rand())) * Math.cos(2 * Math.PI * rand());
}

interface Shared {
  features: number[][];
  labels: string[];
  k: number;
  alpha: number;
}

function sharedDataset(seed: number): Shared {
  const rand = mulberry32(seed);
  const d = 1 + Math.floor(rand() * 4);
  const nClasses = 2 + Math.floor(rand() * 2);
  const features: number[][] = [];
  const labels: string[] = [];
  let minClass = Infinity;
  for (let c = 0; c < nClasses; c++) {
    const m = 8 + Math.floor(rand() * 25);
    minClass = Math.min(minClass, m);
    const center = Array.from({ length: d }, () => rand() * 8 - 4);
    for (let i = 0; i < m; i++) {
      features.push(center.map((cv) => cv + gaussian(rand)));
      labels.push(`class-${c}`);
    }
  }
  const k = 1 + Math.floor(rand() * Math.min(6, minClass - 1));
  const alphas = [25, 50, 75, 80, 95];
  return { features, labels, k, alpha: alphas[Math.floor(rand() * alphas.length)] };
}

/** Serialize arrays to CSV independently of the client (different float
 * formatter, no quoting), so equality is not an artifact of shared code. */
function independentCsv(features: number[][], labels: string[]): string {
  const lines = [features[0].map((_, j) => `f${j}`).join(",") + ",label"];
  features.forEach((row, i) => {
    lines.push(row.map((v) => v.toExponential()).join(",") + "," + labels[i]);
  });
  return lines.join("\n") + "\n";
}

async function directPartition(ds: Shared): Promise<PartitionClass[]> {
  const dir = await mkdtemp(join(tmpdir(), "coresample-direct-"));
  try {
    const input = join(dir, "direct.csv");
    await writeFile(input, independentCsv(ds.features, ds.labels), "utf8");
    const stdout = await runCli([
      "partition",
      "--input",
      input,
      "--k",
      String(ds.k),
      "--alpha",
      String(ds.alpha),
      "--normalize",
      "off",
    ]);
    return (JSON.parse(stdout) as { classes: PartitionClass[] }).classes;
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}

describe("partition equivalence", () => {
  it("matches a frozen CLI example", async () => {
    const classes = await partition([[0], [1], [3], [7]], ["a", "a", "a", "a"], {
      k: 2,
      alpha: 75,
      normalize: "off",
    });
    expect(classes).toHaveLength(1);
    expect(classes[0].core_ids).toEqual([0, 1, 2]);
    expect(classes[0].border_ids).toEqual([3]);
    expect(classes[0].threshold).toBeCloseTo(3.125, 12);
  });

  it("agrees with direct CLI runs on 20 shared datasets", async () => {
    for (let seed = 1; seed <= 20; seed++) {
      const ds = sharedDataset(seed);
      const viaClient = await partition(ds.features, ds.labels, {
        k: ds.k,
        alpha: ds.alpha,
        normalize: "off",
      });
      const viaCli = await directPartition(ds);
      expect(viaClient).toEqual(viaCli);
    }
  });
});

describe("sweep wrapper equivalence", () => {
  it("returns the CLI report verbatim", async () => {
    const ds = sharedDataset(99);
    const report = await compressionSweep(ds.features, ds.labels, [0, 0.25, 0.5], {
      k: 2,
      seed: 5,
    });
    expect(report.experiment).toBe("sweep");
    expect(report.rows).toHaveLength(3);
    expect(report.rows[0].compression).toBe(0);
    for (const row of report.rows) {
      expect(row.metrics.knn.f1).toBeGreaterThanOrEqual(0);
      expect(row.metrics.knn.f1).toBeLessThanOrEqual(1);
    }
    const again = await compressionSweep(ds.features, ds.labels, [0, 0.25, 0.5], {
      k: 2,
      seed: 5,
    });
    expect(again).toEqual(report);
    expect(report.rows.map((r) => r.n_train_after)).toEqual(
      [...report.rows.map((r) => r.n_train_after)].sort((a, b) => b - a),
    );
  });
});

describe("resampling wrappers", () => {
  const blob = (
    n: number,
    label: string,
    cx: number,
    seedOffset: number,
  ): [number[][], string[]] => {
    const rand = mulberry32(1000 + seedOffset);
    const features = Array.from({ length: n }, () => [cx + gaussian(rand), gaussian(rand)]);
    return [features, Array.from({ length: n }, () => label)];
  };

  it("hybrid balances classes and tags synthetic rows", async () => {
    const [fa, la] = blob(60, "big", 0, 1);
    const [fb, lb] = blob(20, "small", 6, 2);
    const result = await hybridResample([...fa, ...fb], [...la, ...lb], {
      compression: 0.25,
      seed: 3,
      normalize: "off",
    });
    const counts = result.labels.reduce<Record<string, number>>((acc, lab) => {
      acc[lab] = (acc[lab] ?? 0) + 1;
      return acc;
    }, {});
    expect(counts).toEqual({ big: 45, small: 45 });
    expect(result.provenance.filter((t) => t === "synthetic")).toHaveLength(25);
    expect(result.features).toHaveLength(90);
  });

  it("oversample targets the minority by default", async () => {
    const [fa, la] = blob(30, "neg", 0, 3);
    const [fb, lb] = blob(10, "pos", 6, 4);
    const result = await oversampleBorder([...fa, ...fb], [...la, ...lb], undefined, {
      seed: 1,
      normalize: "off",
    });
    const pos = result.labels.filter((lab) => lab === "pos");
    expect(pos).toHaveLength(30);
  });

  it("downsample at zero compression round-trips labels with CSV metacharacters", async () => {
    const features = [[0.5], [1.5], [2.5], [3.5]];
    const labels = ['tricky,"label"', 'tricky,"label"', "plain", "plain"];
    const result = await downsampleCore(features, labels, undefined, {
      k: 1,
      compression: 0,
      normalize: "off",
    });
    expect(result.labels).toEqual(labels);
    expect(result.features).toEqual(features);
    expect(result.provenance).toEqual(["original", "original", "original", "original"]);
  });
});

describe("boundary validation", () => {
  const ok = [[1, 2], [3, 4]];

  it("rejects ragged feature rows", async () => {
    await expect(partition([[1, 2], [3]], ["a", "b"])).rejects.toThrow(TypeError);
  });

  it("rejects non-finite values", async () => {
    await expect(partition([[1, NaN]], ["a"])).rejects.toThrow(TypeError);
    await expect(partition([[1, Infinity]], ["a"])).rejects.toThrow(TypeError);
  });

  it("rejects label/feature length mismatch", async () => {
    await expect(partition(ok, ["a"])).rejects.toThrow(RangeError);
  });

  it("rejects empty datasets", async () => {
    await expect(partition([], [])).rejects.toThrow(RangeError);
  });

  it("rejects non-string labels", async () => {
    await expect(
      partition(ok, [1, 2] as unknown as string[]),
    ).rejects.toThrow(TypeError);
  });

  it("surfaces CLI data errors with their exit code", async () => {
    // class smaller than k in strict mode -> CLI exits 2
    try {
      await partition([[0], [1]], ["a", "a"], { k: 5 });
      expect.unreachable("partition should have failed");
    } catch (error) {
      expect(error).toBeInstanceOf(CliError);
      expect((error as CliError).exitCode).toBe(2);
    }
  });
});

describe("version", () => {
  it("mirrors the primary component", async () => {
    expect(await cliVersion()).toBe(VERSION);
  });
});
