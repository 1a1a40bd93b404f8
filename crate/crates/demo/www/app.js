import init, { verifyGrid, chainGrid, triplesForSum, kappaRoots } from "./pkg/apmagic_demo.js";

const $ = (id) => document.getElementById(id);

function el(tag, text, cls) {
  const e = document.createElement(tag);
  if (text !== undefined) e.textContent = text;
  if (cls) e.className = cls;
  return e;
}

function gridTable(view) {
  const table = el("table", undefined, "grid");
  for (let r = 0; r < view.order; r++) {
    const tr = table.insertRow();
    for (let c = 0; c < view.order; c++) {
      tr.insertCell().textContent = view.cells[r * view.order + c];
    }
  }
  return table;
}

function describe(view) {
  const rep = view.report;
  const parts = [rep.classification, "constants {" + rep.constants.join(", ") + "}"];
  if (rep.all_square) parts.push("all squares");
  if (rep.repeated.length) parts.push("repeated {" + rep.repeated.join(", ") + "}");
  if (view.chain) parts.push(`chain x23=${view.chain.x23} D1=${view.chain.d1} D2=${view.chain.d2}`);
  return parts.join(", ");
}

function show(target, build) {
  const out = $(target);
  out.replaceChildren();
  try {
    build(out);
  } catch (e) {
    out.append(el("p", String(e.message ?? e), "error"));
  }
}

function showGrid(out, view) {
  out.append(gridTable(view), el("p", describe(view)));
}

await init();

$("grid-go").onclick = () =>
  show("grid-out", (out) => showGrid(out, JSON.parse(verifyGrid($("grid-text").value, $("grid-roots").checked))));

$("chain-go").onclick = () =>
  show("chain-out", (out) => {
    const view = JSON.parse(chainGrid(BigInt($("chain-x").value), BigInt($("chain-d1").value), BigInt($("chain-d2").value)));
    showGrid(out, view);
  });

$("sum-go").onclick = () =>
  show("sum-out", (out) => {
    const res = JSON.parse(triplesForSum(BigInt($("sum-d").value)));
    if (!res.triples.length) out.append(el("p", "no triples"));
    for (const t of res.triples) {
      out.append(el("p", `${t.a}² ${t.b}² ${t.c}²  offsets ${t.offsets.join(" ")}  kappa ${t.kappa}`));
    }
    if (res.near_misses.length) {
      out.append(el("p", `${res.near_misses.length} semi-magic arrangements of the first three:`));
      showGrid(out, res.near_misses[0]);
    }
  });

$("kappa-go").onclick = () =>
  show("kappa-out", (out) => {
    const res = JSON.parse(kappaRoots($("kappa-alpha").value));
    out.append(el("p", `alpha = ${res.alpha}, discriminant = ${res.discriminant}`));
    if (!res.roots.length) out.append(el("p", "no rational kappa > 1"));
    for (const r of res.roots) {
      out.append(el("p", `kappa = ${r.value}${r.valid_offset ? "" : " (first offset negative)"}`));
    }
  });
