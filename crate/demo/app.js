// Glue for the wasm demo. Build the module first:
//   wasm-pack build crates/sdiff-wasm --target web --out-dir ../../demo/pkg
// then serve this directory, e.g.  python3 -m http.server -d demo

import init, { toy_curves, prox_explore, recovery_demo } from "./pkg/sdiff_wasm.js";

const BLUE = "#0b69c7";
const RED = "#c7360b";
const GRAY = "#9aa3ad";

function linePlot(canvas, xs, series, opts = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const pad = { l: 40, r: 8, t: 8, b: 22 };
  let ymin = Infinity, ymax = -Infinity;
  for (const s of series) for (const v of s.v) {
    if (Number.isFinite(v)) { ymin = Math.min(ymin, v); ymax = Math.max(ymax, v); }
  }
  if (!Number.isFinite(ymin)) { ymin = 0; ymax = 1; }
  if (ymax - ymin < 1e-12) { ymax = ymin + 1; }
  const xmin = xs[0], xmax = xs[xs.length - 1];
  const px = x => pad.l + (x - xmin) / (xmax - xmin) * (w - pad.l - pad.r);
  const py = y => h - pad.b - (y - ymin) / (ymax - ymin) * (h - pad.t - pad.b);

  ctx.strokeStyle = "#dfe3e8";
  ctx.beginPath();
  if (ymin < 0 && ymax > 0) { ctx.moveTo(px(xmin), py(0)); ctx.lineTo(px(xmax), py(0)); }
  if (xmin < 0 && xmax > 0) { ctx.moveTo(px(0), py(ymin)); ctx.lineTo(px(0), py(ymax)); }
  ctx.stroke();

  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = s.width || 1.6;
    ctx.beginPath();
    let pen = false;
    for (let i = 0; i < xs.length; i++) {
      const v = s.v[i];
      if (!Number.isFinite(v)) { pen = false; continue; }
      if (pen) ctx.lineTo(px(xs[i]), py(v)); else { ctx.moveTo(px(xs[i]), py(v)); pen = true; }
    }
    ctx.stroke();
  }
  if (opts.markers) {
    for (const m of opts.markers) {
      ctx.fillStyle = m.color;
      ctx.beginPath();
      ctx.arc(px(m.x), py(m.y), 3.5, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
  ctx.fillStyle = "#68727f";
  ctx.font = "11px system-ui";
  ctx.fillText(ymax.toPrecision(3), 2, pad.t + 9);
  ctx.fillText(ymin.toPrecision(3), 2, h - pad.b);
  ctx.fillText(String(xmin), pad.l, h - 6);
  ctx.fillText(String(xmax), w - pad.r - 24, h - 6);
  if (opts.xlabel) ctx.fillText(opts.xlabel, w / 2 - 10, h - 6);
}

function stemPlot(canvas, series) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const pad = { l: 36, r: 8, t: 8, b: 18 };
  const n = series[0].v.length;
  let ymax = 1e-9;
  for (const s of series) for (const v of s.v) ymax = Math.max(ymax, Math.abs(v));
  const px = i => pad.l + (i + 0.5) / n * (w - pad.l - pad.r);
  const py = y => h - pad.b - (y + ymax) / (2 * ymax) * (h - pad.t - pad.b);
  ctx.strokeStyle = "#dfe3e8";
  ctx.beginPath(); ctx.moveTo(pad.l, py(0)); ctx.lineTo(w - pad.r, py(0)); ctx.stroke();
  series.forEach((s, k) => {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = s.width || 1.4;
    const dx = (k - (series.length - 1) / 2) * 2.2;
    ctx.beginPath();
    for (let i = 0; i < n; i++) {
      if (s.v[i] === 0) continue;
      ctx.moveTo(px(i) + dx, py(0));
      ctx.lineTo(px(i) + dx, py(s.v[i]));
    }
    ctx.stroke();
  });
  ctx.fillStyle = "#68727f";
  ctx.font = "11px system-ui";
  ctx.fillText(ymax.toPrecision(3), 2, pad.t + 9);
}

// --- toy landscape -------------------------------------------------------

const toyGrid = document.getElementById("toy-grid");
const toyCanvases = [];
for (let i = 0; i < 10; i++) {
  const fig = document.createElement("figure");
  const canvas = document.createElement("canvas");
  canvas.width = 200; canvas.height = 130;
  const cap = document.createElement("figcaption");
  fig.append(canvas, cap);
  toyGrid.append(fig);
  toyCanvases.push({ canvas, cap });
}

function drawToy() {
  const s = Number(document.getElementById("toy-s").value);
  document.getElementById("toy-s-label").textContent = s;
  const sweep = JSON.parse(toy_curves(0.02, s));
  const lines = [];
  sweep.curves.forEach((c, i) => {
    const { canvas, cap } = toyCanvases[i];
    linePlot(canvas, sweep.t, [{ v: c.values, color: c.s_difference ? BLUE : GRAY, width: 1.4 }], {
      markers: [{ x: c.argmin_t, y: c.min_value, color: RED }],
    });
    cap.textContent = c.label.replace(/_/g, " ");
    lines.push(`${c.label}: argmin t = ${c.argmin_t.toFixed(2)}`);
  });
  document.getElementById("toy-readout").textContent = lines.join("\n");
}
document.getElementById("toy-s").addEventListener("input", drawToy);

// --- prox explorer -------------------------------------------------------

function drawProx() {
  const readout = document.getElementById("prox-readout");
  try {
    const y = document.getElementById("prox-y").value
      .split(",").map(t => Number(t.trim())).filter(t => Number.isFinite(t));
    const lambda = Number(document.getElementById("prox-lambda").value);
    const sCtl = document.getElementById("prox-s");
    sCtl.max = Math.max(1, y.length);
    const s = Math.min(Number(sCtl.value), y.length);
    document.getElementById("prox-lambda-label").textContent = lambda.toFixed(2);
    document.getElementById("prox-s-label").textContent = s;
    const regularizer = JSON.parse(document.getElementById("prox-reg").value);
    const req = JSON.stringify({ regularizer, s, lambda, y });
    const res = JSON.parse(prox_explore(req));
    stemPlot(document.getElementById("prox-stem"), [
      { v: y, color: GRAY, width: 3.2 },
      { v: res.x, color: BLUE, width: 1.8 },
    ]);
    linePlot(document.getElementById("prox-curve"), res.curve_t, [
      { v: res.curve_t, color: "#e4e7ea", width: 1 },
      { v: res.curve_v, color: BLUE },
    ], { xlabel: "t" });
    readout.classList.remove("err");
    readout.textContent =
      `P(y) = ${res.penalty_at_y.toFixed(4)}   P(prox y) = ${res.penalty_at_x.toFixed(4)}   ` +
      `E(prox y) = ${res.objective.toFixed(4)}   top block: [${res.top_indices.join(", ")}]\n` +
      `x = [${res.x.map(v => v.toFixed(3)).join(", ")}]`;
  } catch (e) {
    readout.classList.add("err");
    readout.textContent = String(e);
  }
}
for (const id of ["prox-reg", "prox-lambda", "prox-s", "prox-y"]) {
  document.getElementById(id).addEventListener("input", drawProx);
}

// --- recovery demo -------------------------------------------------------

function runRecovery() {
  const readout = document.getElementById("rec-readout");
  try {
    const req = JSON.stringify({
      m: Number(document.getElementById("rec-m").value),
      n: Number(document.getElementById("rec-n").value),
      s_truth: Number(document.getElementById("rec-s").value),
      noise_scale: Number(document.getElementById("rec-noise").value),
      seed: Number(document.getElementById("rec-seed").value),
      regularizer: JSON.parse(document.getElementById("rec-reg").value),
      dct: document.getElementById("rec-dct").checked,
    });
    const res = JSON.parse(recovery_demo(req));
    stemPlot(document.getElementById("rec-stem"), [
      { v: res.truth, color: GRAY, width: 3.0 },
      { v: res.sdiff_fbs.x, color: BLUE, width: 1.6 },
      { v: res.l1_admm.x, color: RED, width: 1.0 },
    ]);
    const curves = [
      { v: res.sdiff_fbs.log_rel_err_curve, color: BLUE },
      { v: res.l1_admm.log_rel_err_curve, color: RED },
    ];
    const len = Math.max(...curves.map(c => c.v.length));
    const xs = Array.from({ length: len }, (_, i) => i);
    for (const c of curves) while (c.v.length < len) c.v.push(NaN);
    linePlot(document.getElementById("rec-curve"), xs, curves, { xlabel: "iteration" });
    readout.classList.remove("err");
    readout.textContent =
      `s-difference FBS: rel err ${res.sdiff_fbs.rel_err.toExponential(3)} in ${res.sdiff_fbs.iterations} iterations\n` +
      `l1-ADMM baseline: rel err ${res.l1_admm.rel_err.toExponential(3)} in ${res.l1_admm.iterations} iterations\n` +
      `gray = ground truth, blue = s-difference FBS, red = l1-ADMM   (L = ${res.lipschitz.toFixed(3)})`;
  } catch (e) {
    readout.classList.add("err");
    readout.textContent = String(e);
  }
}
document.getElementById("rec-run").addEventListener("click", runRecovery);

await init();
drawToy();
drawProx();
runRecovery();
