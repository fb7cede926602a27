/**
 * Parsers for the simulator's documented CSV schemas. Nothing here imports
 * simulation code; the CSV files are the only contract.
 */

export const RUN_CSV_HEADER =
  "year,pct_cheaters_fired,pct_volunteer_monitors,n_private_traders," +
  "permission_granted,n_deaths,n_fired";

export const SUMMARY_CSV_HEADER =
  "society,runs,permission_rate,mean_pct_fired_pre70,mean_pct_fired_post70";

export interface YearRow {
  year: number;
  pctCheatersFired: number;
  pctVolunteerMonitors: number;
  nPrivateTraders: number;
  permissionGranted: boolean;
  nDeaths: number;
  nFired: number;
}

export interface SummaryRow {
  society: string;
  runs: number;
  permissionRate: number;
  meanPctFiredPre70: number;
  meanPctFiredPost70: number;
}

function fail(fileName: string, message: string): never {
  throw new Error(`${fileName}: ${message}`);
}

function num(fileName: string, field: string, raw: string): number {
  const value = Number(raw);
  if (raw.trim() === "" || Number.isNaN(value)) {
    fail(fileName, `${field} is not a number: ${JSON.stringify(raw)}`);
  }
  return value;
}

export function parseRunCsv(text: string, fileName: string): YearRow[] {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0 || lines[0] !== RUN_CSV_HEADER) {
    fail(fileName, "missing or unexpected run CSV header");
  }
  const rows: YearRow[] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    if (parts.length !== 7) {
      fail(fileName, `expected 7 columns, got ${parts.length}: ${line}`);
    }
    const flag = parts[4];
    if (flag !== "0" && flag !== "1") {
      fail(fileName, `permission_granted must be 0 or 1, got ${flag}`);
    }
    rows.push({
      year: num(fileName, "year", parts[0]),
      pctCheatersFired: num(fileName, "pct_cheaters_fired", parts[1]),
      pctVolunteerMonitors: num(fileName, "pct_volunteer_monitors", parts[2]),
      nPrivateTraders: num(fileName, "n_private_traders", parts[3]),
      permissionGranted: flag === "1",
      nDeaths: num(fileName, "n_deaths", parts[5]),
      nFired: num(fileName, "n_fired", parts[6]),
    });
  }
  if (rows.length === 0) {
    fail(fileName, "no data rows");
  }
  return rows;
}

export function parseSummaryCsv(text: string, fileName: string): SummaryRow[] {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0 || lines[0] !== SUMMARY_CSV_HEADER) {
    fail(fileName, "missing or unexpected summary CSV header");
  }
  return lines.slice(1).map((line) => {
    const parts = line.split(",");
    if (parts.length !== 5) {
      fail(fileName, `expected 5 columns, got ${parts.length}: ${line}`);
    }
    return {
      society: parts[0],
      runs: num(fileName, "runs", parts[1]),
      permissionRate: num(fileName, "permission_rate", parts[2]),
      meanPctFiredPre70: num(fileName, "mean_pct_fired_pre70", parts[3]),
      meanPctFiredPost70: num(fileName, "mean_pct_fired_post70", parts[4]),
    };
  });
}
