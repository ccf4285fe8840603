// Expects `wasm-pack build --target web --out-dir www/pkg` to have run.
import init, { problems, suggestedStart, theoryConstants, certify, newton } from "./pkg/riem_alpha_demo.js";

const $ = (id) => document.getElementById(id);

const fmt = (x) => (typeof x === "number" ? x.toExponential(3) : String(x));

function startFor(id) {
  const coords = JSON.parse(suggestedStart(id, 0.05));
  return Array.isArray(coords) ? coords.map((x) => x.toPrecision(6)).join(", ") : "";
}

function showCertificate(json) {
  const v = JSON.parse(json);
  const out = $("verdict");
  if (v.error) {
    out.className = "bad";
    out.textContent = v.error;
    return;
  }
  const c = v.certificate;
  out.className = c.verdict === "Certified" ? "ok" : "bad";
  let text = `${c.verdict}: beta ${fmt(c.beta)}, gamma in [${fmt(c.gamma.lower)}, ${fmt(c.gamma.upper)}], ` +
    `alpha in [${fmt(c.alpha_lower)}, ${fmt(c.alpha_upper)}]`;
  if (c.root_distance_bound != null) text += `; a zero lies within ${fmt(c.root_distance_bound)}`;
  out.textContent = text;
}

function showTrace(json) {
  const v = JSON.parse(json);
  const out = $("trace");
  if (v.error) {
    out.innerHTML = `<p class="bad"></p>`;
    out.firstChild.textContent = v.error;
    return;
  }
  const rows = v.betas.map((b, k) => {
    const d = v.distances ? fmt(v.distances[k]) : "";
    return `<tr><td>${k}</td><td>${fmt(b)}</td><td>${d}</td></tr>`;
  });
  out.innerHTML =
    `<p>${v.termination} after ${v.points.length - 1} steps</p>` +
    `<table><tr><th>k</th><th>step length</th><th>distance to zero</th></tr>${rows.join("")}</table>`;
}

async function main() {
  await init();
  const list = JSON.parse(problems());
  const select = $("problem");
  for (const entry of list) {
    const opt = document.createElement("option");
    opt.value = entry.id;
    opt.textContent = entry.id;
    select.appendChild(opt);
  }
  const describe = () => {
    const entry = list.find((e) => e.id === select.value);
    $("about").textContent = `${entry.description} (${entry.manifold})`;
    $("point").value = startFor(entry.id);
  };
  select.addEventListener("change", describe);
  describe();

  $("certify").addEventListener("click", () =>
    showCertificate(certify(select.value, $("point").value, Number($("dirs").value))));
  $("run").addEventListener("click", () =>
    showTrace(newton(select.value, $("point").value, Number($("steps").value))));

  const c = JSON.parse(theoryConstants());
  $("constants").textContent = Object.entries(c).map(([k, x]) => `${k.padEnd(7)} ${x}`).join("\n");
}

main();
