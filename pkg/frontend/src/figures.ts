import * as fs from "node:fs";
import * as path from "node:path";

import { detectReformYear, meanFiredSeries } from "./aggregate.js";
import { parseRunCsv, parseSummaryCsv, type SummaryRow, type YearRow } from "./csv.js";
import { lineChart } from "./svg.js";

const DEFAULT_REFORM_YEAR = 70;

interface SocietyData {
  label: string;
  runs: YearRow[][];
}

function readSocieties(resultsDir: string): SocietyData[] {
  if (!fs.existsSync(resultsDir) || !fs.statSync(resultsDir).isDirectory()) {
    throw new Error(`${resultsDir}: not a results directory`);
  }
  const societies: SocietyData[] = [];
  for (const entry of fs.readdirSync(resultsDir).sort()) {
    const dir = path.join(resultsDir, entry);
    if (!fs.statSync(dir).isDirectory()) {
      continue;
    }
    const runFiles = fs
      .readdirSync(dir)
      .filter((name) => /^run_\d+\.csv$/.test(name))
      .sort();
    if (runFiles.length === 0) {
      continue;
    }
    const runs = runFiles.map((name) => {
      const file = path.join(dir, name);
      return parseRunCsv(fs.readFileSync(file, "utf-8"), file);
    });
    societies.push({ label: entry, runs });
  }
  if (societies.length === 0) {
    throw new Error(`${resultsDir}: no per-run CSVs found`);
  }
  return societies;
}

function readSummary(resultsDir: string): SummaryRow[] {
  const file = path.join(resultsDir, "summary.csv");
  if (!fs.existsSync(file)) {
    throw new Error(`${file}: missing summary CSV`);
  }
  return parseSummaryCsv(fs.readFileSync(file, "utf-8"), file);
}

function permissionTable(summary: SummaryRow[], societies: SocietyData[]): string {
  const byLabel = new Map(summary.map((row) => [row.society, row]));
  const lines = [
    "# Permission for private trade",
    "",
    "| society | runs | permission rate |",
    "| ------- | ---- | --------------- |",
  ];
  for (const society of societies) {
    const row = byLabel.get(society.label);
    if (row === undefined) {
      throw new Error(`summary.csv: no row for society ${society.label}`);
    }
    lines.push(
      `| ${row.society} | ${row.runs} | ${(row.permissionRate * 100).toFixed(1)}% |`,
    );
  }
  return lines.join("\n") + "\n";
}

/**
 * Render one figure per society plus the permission table into outDir.
 * Everything is computed before anything is written, so a bad input file
 * leaves the output directory untouched. Returns the written paths.
 */
export function makeFigures(resultsDir: string, outDir: string): string[] {
  const societies = readSocieties(resultsDir);
  const summary = readSummary(resultsDir);

  const outputs = new Map<string, string>();
  for (const society of societies) {
    const series = meanFiredSeries(society.runs, society.label);
    const reformYear = detectReformYear(society.runs) ?? DEFAULT_REFORM_YEAR;
    const svg = lineChart({
      title: `${society.label}: mean % of cheaters fired per year`,
      series,
      reformYear,
    });
    outputs.set(`${society.label}.svg`, svg);
  }
  outputs.set("permissions.md", permissionTable(summary, societies));

  fs.mkdirSync(outDir, { recursive: true });
  const written: string[] = [];
  for (const [name, content] of [...outputs.entries()].sort()) {
    const target = path.join(outDir, name);
    fs.writeFileSync(target, content);
    written.push(target);
  }
  return written;
}
