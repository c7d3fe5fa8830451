import init, { rate_curves, constant_rate_surface, Evolution, decodeRandom } from "./pkg/mgep_wasm.js";

const PROBLEMS = ["f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9", "f10", "f11", "f12"];
const $ = (id) => document.getElementById(id);

function plot(canvas, series, { yMin, yMax, log = false } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 36;
  ctx.clearRect(0, 0, w, h);
  const f = (y) => (log ? Math.log10(y) : y);
  const xs = series.flatMap((s) => s.x);
  const ys = series.flatMap((s) => s.y.map(f)).filter(Number.isFinite);
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  const y0 = yMin ?? Math.min(...ys), y1 = yMax ?? Math.max(...ys);
  const sx = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const sy = (y) => h - pad + ((y0 - y) / (y1 - y0 || 1)) * (h - 2 * pad);
  ctx.strokeStyle = "#aaa";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  const label = (v) => (log ? "1e" + v.toFixed(1) : v.toPrecision(3));
  ctx.fillText(label(y1), 2, pad + 4);
  ctx.fillText(label(y0), 2, h - pad);
  ctx.fillText(String(+x0.toPrecision(3)), pad, h - pad + 14);
  ctx.fillText(String(+x1.toPrecision(3)), w - pad - 20, h - pad + 14);
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    let pen = false;
    s.x.forEach((x, i) => {
      const y = f(s.y[i]);
      if (!Number.isFinite(y)) { pen = false; return; }
      pen ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y));
      pen = true;
    });
    ctx.stroke();
  }
}

function drawControllers() {
  const v = rate_curves(201);
  const d = [], pc = [], pm = [];
  for (let i = 0; i < v.length; i += 3) { d.push(v[i]); pc.push(v[i + 1]); pm.push(v[i + 2]); }
  plot($("curves"), [{ x: d, y: pc, color: "#c33" }, { x: d, y: pm, color: "#36c" }], { yMin: 0.05, yMax: 0.3 });

  const n = 56;
  const s = constant_rate_surface(n, 1000);
  const c = $("surface"), ctx = c.getContext("2d");
  const cell = c.width / n;
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const t = s[i * n + j] / 0.5;
      ctx.fillStyle = `rgb(${Math.round(255 * t)}, ${Math.round(80 + 100 * (1 - t))}, ${Math.round(255 * (1 - t))})`;
      ctx.fillRect(j * cell, c.height - (i + 1) * cell, cell + 1, cell + 1);
    }
  }
}

function run() {
  const out = $("run-out");
  try {
    const e = new Evolution(
      $("run-problem").value,
      Number($("run-pop").value),
      Number($("run-gens").value),
      BigInt($("run-seed").value),
      $("run-adaptive").checked,
    );
    const t = e.trace();
    const col = (k) => Array.from({ length: e.generations }, (_, i) => t[i * 7 + k]);
    const gen = col(0), best = col(1), avg = col(2);
    const positive = best.every((y) => y > 0) && avg.every((y) => !Number.isFinite(y) || y > 0);
    plot($("run-fitness"), [{ x: gen, y: avg, color: "#999" }, { x: gen, y: best, color: "#222" }], { log: positive });
    plot($("run-rates"), [
      { x: gen, y: col(4), color: "#c33" },
      { x: gen, y: col(5), color: "#36c" },
      { x: gen, y: col(6), color: "#393" },
      { x: gen, y: col(3), color: "#a6a" },
    ], { yMin: 0, yMax: 1 });
    const point = Array.from(e.bestPoint()).map((x) => x.toFixed(6));
    out.textContent =
      `best ${e.bestFitness} at generation ${e.bestGeneration} of ${e.generations - 1}\n` +
      `x = (${point.slice(0, 8).join(", ")}${point.length > 8 ? ", ..." : ""})\n\n` + e.bestFormulas();
    e.free();
  } catch (err) {
    out.textContent = String(err);
  }
}

function decode() {
  try {
    $("dec-out").textContent = decodeRandom($("dec-problem").value, BigInt($("dec-seed").value));
  } catch (err) {
    $("dec-out").textContent = String(err);
  }
}

await init();
for (const id of ["run-problem", "dec-problem"]) {
  $(id).innerHTML = PROBLEMS.map((p) => `<option>${p}</option>`).join("");
}
$("run-problem").value = "f8";
$("run-go").onclick = run;
$("dec-go").onclick = decode;
drawControllers();
run();
decode();
