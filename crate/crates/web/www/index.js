// Loads the wasm-bindgen output from ./pkg (see the README for the build step).
import init, { exploreEconomy, propagateShock, subsidyDemand } from "./pkg/io_impact_web.js";

const economy = {
  sectors: ["AGR", "MFG", "SVC"],
  flows: [
    [50, 120, 30],
    [80, 300, 150],
    [40, 200, 400],
  ],
  final_demand: [300, 900, 1800],
};

const $ = (id) => document.getElementById(id);
const fmt = (v, d = 4) => (Number.isFinite(v) ? v.toFixed(d) : "—");

function call(fn, errBox, ...args) {
  try {
    $(errBox).textContent = "";
    return JSON.parse(fn(...args));
  } catch (e) {
    $(errBox).textContent = String(e.message ?? e);
    return null;
  }
}

function matrixTable(title, rows, labels) {
  const head = `<tr><th>${title}</th>${labels.map((l) => `<th>${l}</th>`).join("")}</tr>`;
  const body = rows
    .map((r, i) => `<tr><th>${labels[i]}</th>${r.map((v) => `<td>${fmt(v)}</td>`).join("")}</tr>`)
    .join("");
  return `<table>${head}${body}</table>`;
}

function renderEditor() {
  const s = economy.sectors;
  let html = `<table><tr><th>Z</th>${s.map((c) => `<th>${c}</th>`).join("")}<th>f</th></tr>`;
  s.forEach((row, i) => {
    html += `<tr><th>${row}</th>`;
    s.forEach((_, j) => {
      html += `<td><input type="number" min="0" data-i="${i}" data-j="${j}" value="${economy.flows[i][j]}"></td>`;
    });
    html += `<td><input type="number" min="0" data-f="${i}" value="${economy.final_demand[i]}"></td></tr>`;
  });
  $("economy-editor").innerHTML = html + "</table>";
  $("economy-editor").addEventListener("input", (ev) => {
    const t = ev.target;
    const v = Number(t.value);
    if (t.dataset.f !== undefined) economy.final_demand[+t.dataset.f] = v;
    else economy.flows[+t.dataset.i][+t.dataset.j] = v;
    refresh();
  });
  $("shock-sector").innerHTML = s.map((c, i) => `<option value="${i}">${c}</option>`).join("");
}

function renderEconomy() {
  const view = call(exploreEconomy, "economy-error", JSON.stringify(economy));
  if (!view) {
    $("economy-view").innerHTML = "";
    return false;
  }
  const s = view.sectors;
  const vectors = s.map((_, i) => [view.total_output[i], view.value_added[i], view.demand_multipliers[i], view.supply_multipliers[i]]);
  $("economy-view").innerHTML =
    matrixTable("A", view.technical_coefficients, s) +
    matrixTable("L", view.leontief_inverse, s) +
    matrixTable("B", view.allocation_coefficients, s) +
    matrixTable("G", view.ghosh_inverse, s) +
    `<table><tr><th></th><th>x</th><th>v</th><th>demand mult.</th><th>supply mult.</th></tr>${vectors
      .map((r, i) => `<tr><th>${s[i]}</th>${r.map((v, k) => `<td>${fmt(v, k < 2 ? 1 : 4)}</td>`).join("")}</tr>`)
      .join("")}</table>`;
  return true;
}

function renderShock(ok) {
  const amount = Number($("shock-amount").value);
  $("shock-amount-label").textContent = amount;
  const chart = $("shock-chart");
  chart.innerHTML = "";
  $("shock-summary").textContent = "";
  $("shock-caveat").textContent = "";
  if (!ok) return;
  const input = { economy, side: $("shock-side").value, sector: Number($("shock-sector").value), amount };
  const out = call(propagateShock, "shock-error", JSON.stringify(input));
  if (!out) return;
  const max = Math.max(...out.delta_output, 1e-9);
  const barH = 30;
  out.delta_output.forEach((v, i) => {
    const w = (v / max) * 440;
    const y = 10 + i * (barH + 15);
    chart.insertAdjacentHTML(
      "beforeend",
      `<text x="0" y="${y + 19}">${economy.sectors[i]}</text>` +
        `<rect x="50" y="${y}" width="${Math.max(w, 0)}" height="${barH}" fill="${i === input.sector ? "#c65" : "#58a"}"/>` +
        `<text x="${56 + Math.max(w, 0)}" y="${y + 19}">${fmt(v, 2)}</text>`,
    );
  });
  $("shock-summary").textContent = `Total output change ${fmt(out.total, 2)} (multiplier ${fmt(out.multiplier)})`;
  $("shock-caveat").textContent = out.caveat ?? "";
}

function renderSubsidy() {
  const budget = Number($("sub-budget").value) * 1e9;
  const subsidy = Number($("sub-subsidy").value);
  const price = Number($("sub-price").value);
  $("sub-subsidy-label").textContent = `$${subsidy}`;
  $("sub-price-label").textContent = `$${price}`;
  const d = call(subsidyDemand, "sub-error", budget, subsidy, price);
  $("sub-table").innerHTML = d
    ? `<tr><th>households reached</th><td>${(d.households / 1e6).toFixed(2)} M</td></tr>` +
      `<tr><th>induced household spending</th><td>$${(d.induced_household_spend / 1e9).toFixed(2)} B</td></tr>` +
      `<tr><th>total demand</th><td>$${(d.total_demand / 1e9).toFixed(2)} B</td></tr>`
    : "";
}

function refresh() {
  renderShock(renderEconomy());
}

await init();
renderEditor();
refresh();
renderSubsidy();
for (const id of ["shock-side", "shock-sector", "shock-amount"]) $(id).addEventListener("input", () => renderShock(true));
for (const id of ["sub-budget", "sub-subsidy", "sub-price"]) $(id).addEventListener("input", renderSubsidy);
