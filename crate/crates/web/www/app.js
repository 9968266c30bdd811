import init, { generate_invariants, vanishing_ideal, check_divisibility } from "./pkg/polyinv_web.js";

const EXAMPLES = {
  1: { degree: 7, src: "vars x, y;\ninit x := 0, y := 0;\nloop\n  (x, y) := (x + y^5, y + 1);\nend" },
  2: { degree: 2, src: "vars x, r;\nparams a;\ninit x := a/2, r := 0;\nguard x > r;\nloop\n  (x, r) := (x - r, r + 1);\nend" },
  3: {
    degree: 2,
    src: "vars x, y, u, v;\nparams a, b;\ninit x := a, y := b, u := b, v := a;\nguard x != y;\nloop\n" +
      "  if x > y then\n    (x, y, u, v) := (x - y, y, u, u + v);\n  else\n    (x, y, u, v) := (x, y - x, u + v, v);\n  end\nend",
  },
};

const $ = (id) => document.getElementById(id);

function show(id, fn) {
  const out = $(id);
  out.className = "";
  out.textContent = "working...";
  // let the browser paint before the (synchronous) computation
  setTimeout(() => {
    try {
      out.textContent = JSON.stringify(JSON.parse(fn()), null, 2);
    } catch (e) {
      out.className = "error";
      out.textContent = String(e);
    }
  }, 0);
}

function summary(json) {
  const r = JSON.parse(json);
  const lines = r.invariants.map((v) => `${v.poly.text} = 0`);
  if (!lines.length) lines.push(r.nonexistence ?? "no invariant verified");
  return JSON.stringify({ invariants: lines, min_degree: r.min_degree, candidates: r.candidates, report: r });
}

await init();

$("gen-example").addEventListener("change", (e) => {
  const ex = EXAMPLES[e.target.value];
  if (ex) {
    $("gen-src").value = ex.src;
    $("gen-deg").value = ex.degree;
  }
});
$("gen-run").addEventListener("click", () =>
  show("gen-out", () => summary(generate_invariants($("gen-src").value, Number($("gen-deg").value), BigInt($("gen-seed").value)))),
);
$("van-run").addEventListener("click", () => show("van-out", () => vanishing_ideal($("van-vars").value, $("van-pts").value)));
$("div-run").addEventListener("click", () =>
  show("div-out", () => check_divisibility($("div-vars").value, $("div-f").value, $("div-g").value, BigInt($("div-seed").value))),
);
