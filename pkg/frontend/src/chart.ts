// SVG chart rendering. Values arrive as exact decimal or "p/q" strings;
// equality between points is decided on the exact rationals (ties matter:
// the learned predicates are >= comparisons), while pixel positions may
// round.

import type { ChartPoint } from "./api.js";

export interface Rational {
  num: bigint;
  den: bigint; // always positive
}

export function parseRational(text: string): Rational {
  const s = text.trim();
  const slash = s.indexOf("/");
  if (slash >= 0) {
    const num = BigInt(s.slice(0, slash));
    const den = BigInt(s.slice(slash + 1));
    if (den <= 0n) throw new Error(`bad rational ${text}`);
    return { num, den };
  }
  const dot = s.indexOf(".");
  if (dot < 0) return { num: BigInt(s), den: 1n };
  const sign = s.startsWith("-") ? -1n : 1n;
  const whole = s.slice(0, dot).replace("-", "") || "0";
  const frac = s.slice(dot + 1);
  const den = 10n ** BigInt(frac.length);
  const num = sign * (BigInt(whole) * den + BigInt(frac || "0"));
  return { num, den };
}

export function rationalsEqual(a: Rational, b: Rational): boolean {
  return a.num * b.den === b.num * a.den;
}

export function toNumber(r: Rational): number {
  return Number(r.num) / Number(r.den);
}

/** Indices (0-based) of points sharing their exact value with another point. */
export function tiedIndices(points: ChartPoint[]): Set<number> {
  const rationals = points.map((p) => parseRational(p.value));
  const tied = new Set<number>();
  for (let i = 0; i < rationals.length; i++) {
    for (let j = i + 1; j < rationals.length; j++) {
      if (rationalsEqual(rationals[i], rationals[j])) {
        tied.add(i);
        tied.add(j);
      }
    }
  }
  return tied;
}

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 360;
const HEIGHT = 200;
const PAD = 28;

export function renderChart(points: ChartPoint[]): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("class", "chart");
  svg.setAttribute("role", "img");

  const values = points.map((p) => toNumber(parseRational(p.value)));
  const tied = tiedIndices(points);
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi === lo ? 1 : hi - lo;
  const x = (i: number) =>
    points.length === 1 ? WIDTH / 2 : PAD + (i * (WIDTH - 2 * PAD)) / (points.length - 1);
  const y = (v: number) => HEIGHT - PAD - ((v - lo) * (HEIGHT - 2 * PAD)) / span;

  const line = document.createElementNS(SVG_NS, "polyline");
  line.setAttribute("points", values.map((v, i) => `${x(i)},${y(v)}`).join(" "));
  line.setAttribute("class", "chart-line");
  line.setAttribute("fill", "none");
  svg.appendChild(line);

  values.forEach((v, i) => {
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", String(x(i)));
    dot.setAttribute("cy", String(y(v)));
    dot.setAttribute("r", "5");
    dot.setAttribute("class", tied.has(i) ? "chart-dot tied" : "chart-dot");
    svg.appendChild(dot);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(x(i)));
    label.setAttribute("y", String(y(v) - 10));
    label.setAttribute("text-anchor", "middle");
    label.setAttribute("class", "chart-label");
    label.textContent = tied.has(i) ? `${points[i].value} =` : points[i].value;
    svg.appendChild(label);

    const tick = document.createElementNS(SVG_NS, "text");
    tick.setAttribute("x", String(x(i)));
    tick.setAttribute("y", String(HEIGHT - 8));
    tick.setAttribute("text-anchor", "middle");
    tick.setAttribute("class", "chart-tick");
    tick.textContent = String(points[i].index);
    svg.appendChild(tick);
  });

  return svg;
}
