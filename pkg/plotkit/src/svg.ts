/** Hand-rolled SVG scatter/line figures with log or linear axes. */

export type Scale = "linear" | "log";

export interface Axis {
  label: string;
  scale: Scale;
  min: number;
  max: number;
}

const WIDTH = 640;
const HEIGHT = 480;
const MARGIN = { left: 72, right: 24, top: 36, bottom: 56 };

function toUnit(v: number, axis: Axis): number {
  if (axis.scale === "log") {
    return (
      (Math.log10(v) - Math.log10(axis.min)) /
      (Math.log10(axis.max) - Math.log10(axis.min))
    );
  }
  return (v - axis.min) / (axis.max - axis.min);
}

function ticks(axis: Axis): number[] {
  if (axis.scale === "log") {
    const lo = Math.ceil(Math.log10(axis.min));
    const hi = Math.floor(Math.log10(axis.max));
    const out: number[] = [];
    const step = Math.max(1, Math.ceil((hi - lo) / 8));
    for (let e = lo; e <= hi; e += step) out.push(10 ** e);
    return out;
  }
  const out: number[] = [];
  const span = axis.max - axis.min;
  const step = span / 5;
  for (let i = 0; i <= 5; i++) out.push(axis.min + i * step);
  return out;
}

function fmtTick(v: number, axis: Axis): string {
  if (axis.scale === "log") {
    const e = Math.round(Math.log10(v));
    return `1e${e}`;
  }
  return Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4 ? v.toExponential(1) : v.toPrecision(3);
}

export class Figure {
  private parts: string[] = [];

  constructor(
    readonly x: Axis,
    readonly y: Axis,
    readonly title: string,
  ) {}

  px(v: number): number {
    return MARGIN.left + toUnit(v, this.x) * (WIDTH - MARGIN.left - MARGIN.right);
  }

  py(v: number): number {
    return HEIGHT - MARGIN.bottom - toUnit(v, this.y) * (HEIGHT - MARGIN.top - MARGIN.bottom);
  }

  private inRange(x: number, y: number): boolean {
    return (
      x >= this.x.min && x <= this.x.max && y >= this.y.min && y <= this.y.max &&
      Number.isFinite(x) && Number.isFinite(y) &&
      (this.x.scale !== "log" || x > 0) && (this.y.scale !== "log" || y > 0)
    );
  }

  markers(xs: number[], ys: number[], color: string, r = 3): void {
    for (let i = 0; i < xs.length; i++) {
      if (!this.inRange(xs[i], ys[i])) continue;
      this.parts.push(
        `<circle cx="${this.px(xs[i]).toFixed(2)}" cy="${this.py(ys[i]).toFixed(2)}" r="${r}" fill="none" stroke="${color}" stroke-width="1.2"/>`,
      );
    }
  }

  line(xs: number[], ys: number[], color: string, width = 2, dash = ""): void {
    const pts: string[] = [];
    for (let i = 0; i < xs.length; i++) {
      if (!this.inRange(xs[i], ys[i])) continue;
      pts.push(`${this.px(xs[i]).toFixed(2)},${this.py(ys[i]).toFixed(2)}`);
    }
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline points="${pts.join(" ")}" fill="none" stroke="${color}" stroke-width="${width}"${dashAttr}/>`,
    );
  }

  legend(entries: Array<{ label: string; color: string }>): void {
    let yPos = MARGIN.top + 8;
    for (const e of entries) {
      this.parts.push(
        `<line x1="${WIDTH - 220}" y1="${yPos}" x2="${WIDTH - 196}" y2="${yPos}" stroke="${e.color}" stroke-width="2"/>`,
        `<text x="${WIDTH - 190}" y="${yPos + 4}" font-size="12">${e.label}</text>`,
      );
      yPos += 18;
    }
  }

  render(): string {
    const frame: string[] = [];
    frame.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      `<text x="${WIDTH / 2}" y="${MARGIN.top - 14}" text-anchor="middle" font-size="15">${this.title}</text>`,
      `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${WIDTH - MARGIN.left - MARGIN.right}" height="${HEIGHT - MARGIN.top - MARGIN.bottom}" fill="none" stroke="black"/>`,
    );
    for (const t of ticks(this.x)) {
      const xp = this.px(t);
      frame.push(
        `<line x1="${xp.toFixed(2)}" y1="${HEIGHT - MARGIN.bottom}" x2="${xp.toFixed(2)}" y2="${HEIGHT - MARGIN.bottom + 5}" stroke="black"/>`,
        `<text x="${xp.toFixed(2)}" y="${HEIGHT - MARGIN.bottom + 20}" text-anchor="middle" font-size="11">${fmtTick(t, this.x)}</text>`,
      );
    }
    for (const t of ticks(this.y)) {
      const yp = this.py(t);
      frame.push(
        `<line x1="${MARGIN.left - 5}" y1="${yp.toFixed(2)}" x2="${MARGIN.left}" y2="${yp.toFixed(2)}" stroke="black"/>`,
        `<text x="${MARGIN.left - 9}" y="${(yp + 4).toFixed(2)}" text-anchor="end" font-size="11">${fmtTick(t, this.y)}</text>`,
      );
    }
    frame.push(
      `<text x="${WIDTH / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="13">${this.x.label}</text>`,
      `<text x="20" y="${HEIGHT / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 20 ${HEIGHT / 2})">${this.y.label}</text>`,
    );
    return [...frame, ...this.parts, "</svg>", ""].join("\n");
  }
}
