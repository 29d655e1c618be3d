import init, { cascade, shadow_curve, fact_scan } from "./pkg/shadowlab_wasm.js";

const $ = (sec, sel) => document.querySelector(`#${sec} ${sel}`);
const num = (sec, name) => Number($(sec, `[name=${name}]`).value);
const str = (sec, name) => $(sec, `[name=${name}]`).value;

function fail(el, e) {
  el.className = "out err";
  el.textContent = String(e);
}

function runCascade() {
  const out = $("cascade", ".out");
  try {
    const r = JSON.parse(cascade(str("cascade", "layer"), num("cascade", "m"), num("cascade", "k"), num("cascade", "s"), num("cascade", "t")));
    const terms = r.levels.map(({ i, a }) => `  level ${i}: a = ${a}`).join("\n");
    out.className = "out";
    out.textContent = `${r.text}\n${terms}`;
  } catch (e) {
    fail(out, e);
  }
}

function plot(canvas, ys) {
  const g = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  g.clearRect(0, 0, w, h);
  const xmax = Math.max(ys.length - 1, 1);
  const ymax = Math.max(...ys, 1);
  g.strokeStyle = "#236";
  g.beginPath();
  ys.forEach((y, x) => {
    const px = 4 + (x / xmax) * (w - 8);
    const py = h - 4 - (y / ymax) * (h - 8);
    x === 0 ? g.moveTo(px, py) : g.lineTo(px, py);
  });
  g.stroke();
}

function runCurve() {
  const out = $("curve", ".out");
  try {
    const r = JSON.parse(shadow_curve(str("curve", "spec"), num("curve", "ell")));
    const ys = r.shadow;
    out.className = "out";
    out.textContent = `${r.spec}: ${ys.length - 1} sets, full layer shadow ${ys[ys.length - 1]}`;
    plot($("curve", "canvas"), ys);
  } catch (e) {
    fail(out, e);
  }
}

function runScan() {
  const out = $("scan", ".out");
  const table = $("scan", "table");
  table.innerHTML = "";
  try {
    const r = JSON.parse(fact_scan(str("scan", "kind"), num("scan", "k"), num("scan", "param"), num("scan", "ell"), num("scan", "lo"), num("scan", "hi")));
    out.className = "out";
    out.textContent = `least strict n: ${r.least ?? "none"}; strict from n = ${r.holds_from ?? "none"} to the end of the range`;
    table.insertAdjacentHTML("beforeend", "<tr><th>n</th><th>m</th><th>construction</th><th>segment</th></tr>");
    for (const row of r.rows) {
      const tr = document.createElement("tr");
      if (row.strict) tr.className = "strict";
      for (const v of [row.n, row.m, row.left, row.right ?? "-"]) {
        const td = document.createElement("td");
        td.textContent = v;
        tr.append(td);
      }
      table.append(tr);
    }
  } catch (e) {
    fail(out, e);
  }
}

await init();
$("cascade", "button").onclick = runCascade;
$("curve", "button").onclick = runCurve;
$("scan", "button").onclick = runScan;
runCascade();
runCurve();
runScan();
