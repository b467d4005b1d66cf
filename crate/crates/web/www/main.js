import init, { filterRgba, entropyCurve, sweepLevels, foggyFixture } from "./pkg/retinex_entropy_web.js";

const $ = (id) => document.getElementById(id);
const COLORS = { original: "#555", uniform: "#1f77b4", low: "#2ca02c", high: "#d62728" };
const MAX_SIDE = 400;

let source = null; // { rgba: Uint8Array, width, height }

function params() {
  return {
    level: $("level").value,
    scale: Number($("scale").value),
    div: Number($("div").value),
    dynamic: Number($("dynamic").value),
    kmax: Number($("kmax").value),
    steps: Number($("steps").value),
  };
}

function draw(canvas, rgba, width, height) {
  canvas.width = width;
  canvas.height = height;
  const data = new ImageData(new Uint8ClampedArray(rgba), width, height);
  canvas.getContext("2d").putImageData(data, 0, 0);
}

function kappas(kmax, steps) {
  return Array.from({ length: steps }, (_, i) => (i === steps - 1 ? kmax : (kmax * i) / (steps - 1)));
}

function plot(series, kmax) {
  const svg = $("chart");
  const W = 420, H = 300, L = 48, R = 90, T = 12, B = 30;
  const all = series.flatMap((s) => s.values);
  let lo = Math.min(...all), hi = Math.max(...all);
  if (hi - lo < 1e-9) { lo -= 0.5; hi += 0.5; }
  const pad = (hi - lo) * 0.05;
  lo -= pad; hi += pad;
  const x = (k) => L + ((W - L - R) * k) / kmax;
  const y = (v) => T + ((H - T - B) * (hi - v)) / (hi - lo);

  let out = `<line x1="${L}" y1="${H - B}" x2="${W - R}" y2="${H - B}" stroke="#999"/>`;
  out += `<line x1="${L}" y1="${T}" x2="${L}" y2="${H - B}" stroke="#999"/>`;
  for (let i = 0; i <= 4; i++) {
    const v = lo + ((hi - lo) * i) / 4, k = (kmax * i) / 4;
    out += `<text x="${L - 4}" y="${y(v) + 4}" font-size="10" text-anchor="end">${v.toFixed(3)}</text>`;
    out += `<text x="${x(k)}" y="${H - B + 14}" font-size="10" text-anchor="middle">${k.toFixed(3)}</text>`;
  }
  series.forEach((s, i) => {
    const ks = kappas(kmax, s.values.length);
    const pts = s.values.map((v, j) => `${x(ks[j]).toFixed(1)},${y(v).toFixed(1)}`).join(" ");
    out += `<polyline fill="none" stroke="${s.color}" stroke-width="2" points="${pts}"/>`;
    out += `<text x="${W - R + 6}" y="${T + 14 + 14 * i}" font-size="11" fill="${s.color}">${s.label}</text>`;
  });
  svg.innerHTML = out;
}

function status(msg) {
  $("status").textContent = msg || "";
}

function refresh() {
  if (!source) return;
  const p = params();
  try {
    const t0 = performance.now();
    const out = filterRgba(source.rgba, source.width, source.height, p.level, p.scale, p.div, p.dynamic);
    const ms = performance.now() - t0;
    draw($("filtered"), out, source.width, source.height);
    const orig = entropyCurve(source.rgba, source.width, source.height, p.kmax, p.steps);
    const filt = entropyCurve(out, source.width, source.height, p.kmax, p.steps);
    $("original-cap").textContent = `original, Shannon ${orig[0].toFixed(4)}`;
    $("filtered-cap").textContent = `${p.level}, scale ${p.scale}, div ${p.div}, dynamic ${p.dynamic}: Shannon ${filt[0].toFixed(4)} (${ms.toFixed(0)} ms)`;
    plot(
      [
        { label: "original", color: COLORS.original, values: Array.from(orig) },
        { label: p.level, color: COLORS[p.level], values: Array.from(filt) },
      ],
      p.kmax,
    );
    $("table").innerHTML = "";
    status("");
  } catch (e) {
    status(String(e));
  }
}

function sweep() {
  if (!source) return;
  const p = params();
  try {
    const report = JSON.parse(
      sweepLevels(source.rgba, source.width, source.height, p.scale, p.div, p.dynamic, p.kmax, p.steps),
    );
    const series = [{ label: "original", color: COLORS.original, values: report.original.curve.values }];
    for (const r of report.records) {
      series.push({ label: r.params.level, color: COLORS[r.params.level], values: r.curve.values });
    }
    plot(series, p.kmax);
    const rows = report.ranking.map((i, rank) => {
      const r = report.records[i];
      const cls = rank === 0 ? "winner" : report.below_original.includes(i) ? "below" : "";
      return `<tr class="${cls}"><td>${rank + 1}. ${r.params.level}</td><td>${r.shannon.toFixed(5)}</td></tr>`;
    });
    $("table").innerHTML =
      `<table><tr><th>level</th><th>Shannon</th></tr>${rows.join("")}` +
      `<tr><td>original</td><td>${report.original.shannon.toFixed(5)}</td></tr></table>` +
      (report.crossings.length ? `<p>${report.crossings.length} curve crossing(s)</p>` : "");
    status("");
  } catch (e) {
    status(String(e));
  }
}

function setSource(rgba, width, height) {
  source = { rgba, width, height };
  draw($("original"), rgba, width, height);
  refresh();
}

function loadFixture() {
  const seed = Number($("seed").value) >>> 0;
  setSource(foggyFixture(160, 120, seed), 160, 120);
}

function loadFile(file) {
  const img = new Image();
  img.onload = () => {
    const k = Math.min(1, MAX_SIDE / Math.max(img.width, img.height));
    const w = Math.max(1, Math.round(img.width * k)), h = Math.max(1, Math.round(img.height * k));
    const c = document.createElement("canvas");
    c.width = w;
    c.height = h;
    const ctx = c.getContext("2d");
    ctx.drawImage(img, 0, 0, w, h);
    setSource(new Uint8Array(ctx.getImageData(0, 0, w, h).data.buffer), w, h);
    URL.revokeObjectURL(img.src);
  };
  img.src = URL.createObjectURL(file);
}

await init();
for (const id of ["scale", "div", "dynamic"]) {
  $(id).addEventListener("input", () => ($(`${id}-out`).textContent = $(id).value));
  $(id).addEventListener("change", refresh);
}
for (const id of ["level", "kmax", "steps"]) $(id).addEventListener("change", refresh);
$("fixture").addEventListener("click", loadFixture);
$("sweep").addEventListener("click", sweep);
$("file").addEventListener("change", (e) => e.target.files[0] && loadFile(e.target.files[0]));
loadFixture();
