import init, {
  dispersion_1d,
  diagonal_3d,
  energy_bound_1d,
  energy_bound_3d,
  evolve_1d,
} from "./pkg/qwalk_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

function report(fn) {
  $("error").textContent = "";
  try {
    fn();
  } catch (e) {
    $("error").textContent = String(e.message ?? e);
  }
}

// series: arrays of [x, y] points; guides: horizontal lines at these y values
function plot(canvas, series, xr, yr, guides = []) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 30;
  const sx = (x) => pad + ((x - xr[0]) / (xr[1] - xr[0])) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - yr[0]) / (yr[1] - yr[0])) * (h - 2 * pad);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#333";
  ctx.fillText(yr[1].toFixed(2), 2, pad + 4);
  ctx.fillText(yr[0].toFixed(2), 2, h - pad);
  ctx.fillText(xr[0].toFixed(2), pad, h - 10);
  ctx.fillText(xr[1].toFixed(2), w - pad - 24, h - 10);
  ctx.setLineDash([4, 4]);
  for (const g of guides) {
    ctx.beginPath();
    ctx.moveTo(sx(xr[0]), sy(g));
    ctx.lineTo(sx(xr[1]), sy(g));
    ctx.stroke();
  }
  ctx.setLineDash([]);
  series.forEach((pts, k) => {
    ctx.fillStyle = COLORS[k % COLORS.length];
    for (const [x, y] of pts) ctx.fillRect(sx(x) - 1, sy(y) - 1, 2, 2);
  });
}

// band energies jump at ±π, so draw them as points
function bands(flat, width) {
  const out = Array.from({ length: width - 1 }, () => []);
  for (let i = 0; i < flat.length; i += width) {
    for (let b = 1; b < width; b++) out[b - 1].push([flat[i], flat[i + b]]);
  }
  return out;
}

function guidesFor(bound) {
  return Number.isNaN(bound) || bound >= Math.PI ? [] : [bound, -bound];
}

function runLine() {
  report(() => {
    const theta = num("theta"), m = num("mass");
    const data = dispersion_1d(theta, m, num("n1"));
    const bound = energy_bound_1d(theta, m);
    plot($("plot1"), bands(data, 3), [-Math.PI, Math.PI], [-Math.PI, Math.PI], guidesFor(bound));
    $("info1").textContent = Number.isNaN(bound) ? "" : `bound ±${bound.toFixed(4)}`;
  });
}

function runDiagonal() {
  report(() => {
    const theta = num("theta"), m = num("mass");
    const data = diagonal_3d(theta, m, num("n3"));
    const bound = energy_bound_3d(theta, m);
    plot($("plot3"), bands(data, 5), [-Math.PI, Math.PI], [-Math.PI, Math.PI], guidesFor(bound));
    $("info3").textContent = Number.isNaN(bound) ? "" : `bound ±${bound.toFixed(4)}`;
  });
}

let animation = 0;

function runEvolve() {
  report(() => {
    cancelAnimationFrame(animation);
    const n = num("sites"), steps = num("steps");
    const data = evolve_1d(num("theta"), num("mass"), n, num("p0"), num("width"), steps);
    const row = n + 1;
    let peak = 0;
    for (let i = 0; i < data.length; i++) if (i % row !== 0) peak = Math.max(peak, data[i]);
    let t = 0;
    const frame = () => {
      const base = t * row;
      const pts = [];
      for (let x = 0; x < n; x++) pts.push([x, data[base + 1 + x]]);
      plot($("plotEvolve"), [pts], [0, n - 1], [0, peak * 1.05]);
      $("infoEvolve").textContent = `step ${t}, centroid ${data[base].toFixed(2)}`;
      if (++t <= steps) animation = requestAnimationFrame(frame);
    };
    frame();
  });
}

await init();
$("run1").onclick = runLine;
$("run3").onclick = runDiagonal;
$("runEvolve").onclick = runEvolve;
runLine();
runDiagonal();
