/** Deterministic SVG line chart, built as a plain string (no DOM). */

export interface ChartOptions {
  title: string;
  series: number[];
  reformYear: number | null;
  width?: number;
  height?: number;
}

const MARGIN = { top: 40, right: 20, bottom: 40, left: 50 };
const Y_MAX = 100; // fixed percent scale so societies are comparable

function fmt(value: number): string {
  return value.toFixed(2);
}

export function lineChart(options: ChartOptions): string {
  const width = options.width ?? 720;
  const height = options.height ?? 400;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const n = options.series.length;
  if (n === 0) {
    throw new Error(`${options.title}: empty series`);
  }
  const x = (year: number) => MARGIN.left + (n === 1 ? 0 : (year / (n - 1)) * plotW);
  const y = (pct: number) => MARGIN.top + plotH - (Math.min(pct, Y_MAX) / Y_MAX) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="20" text-anchor="middle" font-size="16">${options.title}</text>`,
  );

  for (let tick = 0; tick <= Y_MAX; tick += 20) {
    const ty = y(tick);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${fmt(ty)}" x2="${width - MARGIN.right}" ` +
        `y2="${fmt(ty)}" stroke="#dddddd"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 6}" y="${fmt(ty + 4)}" text-anchor="end">${tick}</text>`,
    );
  }
  const xStep = n > 120 ? 50 : 10;
  for (let year = 0; year < n; year += xStep) {
    const tx = x(year);
    parts.push(
      `<line x1="${fmt(tx)}" y1="${MARGIN.top + plotH}" x2="${fmt(tx)}" ` +
        `y2="${MARGIN.top + plotH + 4}" stroke="#333333"/>`,
    );
    parts.push(
      `<text x="${fmt(tx)}" y="${MARGIN.top + plotH + 18}" text-anchor="middle">${year}</text>`,
    );
  }
  parts.push(
    `<text x="${width / 2}" y="${height - 6}" text-anchor="middle">year</text>`,
  );
  parts.push(
    `<text x="14" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 14 ${MARGIN.top + plotH / 2})">% of cheaters fired</text>`,
  );

  if (options.reformYear !== null && options.reformYear < n) {
    const rx = x(options.reformYear);
    parts.push(
      `<line x1="${fmt(rx)}" y1="${MARGIN.top}" x2="${fmt(rx)}" ` +
        `y2="${MARGIN.top + plotH}" stroke="#cc3333" stroke-dasharray="5,4"/>`,
    );
    parts.push(
      `<text x="${fmt(rx + 4)}" y="${MARGIN.top + 12}" fill="#cc3333">reform</text>`,
    );
  }

  const points = options.series
    .map((value, year) => `${fmt(x(year))},${fmt(y(value))}`)
    .join(" ");
  parts.push(
    `<polyline points="${points}" fill="none" stroke="#1f5fa8" stroke-width="1.5"/>`,
  );
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
