import type { YearRow } from "./csv.js";

/** Mean fired-cheater percentage per year across a society's runs. */
export function meanFiredSeries(runs: YearRow[][], label: string): number[] {
  if (runs.length === 0) {
    throw new Error(`${label}: no runs to aggregate`);
  }
  const length = runs[0].length;
  for (const run of runs) {
    if (run.length !== length) {
      throw new Error(`${label}: run series have mixed lengths`);
    }
  }
  const means: number[] = [];
  for (let year = 0; year < length; year++) {
    let total = 0;
    for (const run of runs) {
      total += run[year].pctCheatersFired;
    }
    means.push(total / runs.length);
  }
  return means;
}

/**
 * The year the permission flag first turns on in any run, or null when no
 * run ever granted it. With the simulator's one-off vote this is the reform
 * year itself.
 */
export function detectReformYear(runs: YearRow[][]): number | null {
  let earliest: number | null = null;
  for (const run of runs) {
    for (const row of run) {
      if (row.permissionGranted) {
        if (earliest === null || row.year < earliest) {
          earliest = row.year;
        }
        break;
      }
    }
  }
  return earliest;
}
