import init, { Configurator } from "./pkg/regconf_wasm.js";

const INTRO = {
  alphabet: [..."+0123456789 CDNSadeghkmnoprwy"],
  eol: true,
  variables: ["phone", "country", "zip", "district"],
  constraints: [
    'match(phone, "(()|+)[0123456789 ]*(()|$)")',
    'match(country, "(Denmark|Sweden|Norway)(()|$)")',
    'match(zip, "[0123456789]*(()|$)")',
    'match(district, ".*(()|$)")',
    'match(phone, "+45.*(()|$)") <-> match(country, "Denmark(()|$)")',
    'match(country, "Denmark(()|$)") -> match(zip, "[0123456789][0123456789][0123456789][0123456789](()|$)")',
    'match(zip, "2300(()|$)") && match(country, "Denmark(()|$)") <-> match(district, "Copenhagen S(()|$)")',
  ],
};

const $ = (id) => document.getElementById(id);
let conf = null;

function showError(e) {
  $("error").textContent = e ? String(e.message ?? e) : "";
}

function act(f) {
  try {
    f();
    showError(null);
  } catch (e) {
    showError(e);
  }
  render();
}

function onInput(name, input, previous) {
  const next = input.value;
  try {
    if (next.startsWith(previous)) {
      conf.append(name, next.slice(previous.length));
    } else {
      conf.setValue(name, next);
    }
    showError(null);
  } catch (e) {
    showError(e);
  }
  render();
}

function chip(text, cls, onClick) {
  const b = document.createElement("button");
  b.className = "chip " + cls;
  b.textContent = text === "" ? "·" : text;
  b.title = text === "" ? "current value is acceptable" : text;
  b.addEventListener("click", onClick);
  return b;
}

function render() {
  const state = JSON.parse(conf.state());
  const form = $("form");
  const focused = document.activeElement?.dataset?.name;
  form.replaceChildren();
  for (const f of state.fields) {
    const box = document.createElement("div");
    box.className = "field" + (f.completed ? " completed" : "");

    const label = document.createElement("label");
    label.textContent = f.name;
    const input = document.createElement("input");
    input.value = f.completed ? f.value.slice(0, -1) : f.value;
    input.readOnly = f.completed;
    input.dataset.name = f.name;
    const previous = input.value;
    input.addEventListener("input", () => onInput(f.name, input, previous));
    const done = document.createElement("button");
    done.textContent = f.completed ? "completed" : "Complete";
    done.disabled = !f.can_complete;
    done.addEventListener("click", () => act(() => conf.complete(f.name)));
    box.append(label, input, " ");
    if (state.eol) box.append(done);

    const letters = document.createElement("div");
    letters.className = "chips";
    letters.append(Object.assign(document.createElement("span"), { className: "muted", textContent: "next: " }));
    for (const c of f.next_letters) {
      letters.append(chip(c === " " ? "␣" : c, "", () => act(() => conf.append(f.name, c))));
    }
    const sugg = document.createElement("div");
    sugg.className = "chips";
    sugg.append(Object.assign(document.createElement("span"), { className: "muted", textContent: "completions: " }));
    for (const s of f.suggestions) {
      sugg.append(chip(f.value + s, "suggestion", () => act(() => s && conf.append(f.name, s))));
    }
    const regex = document.createElement("div");
    regex.className = "muted";
    regex.textContent = "domain: " + f.domain_regex;

    box.append(letters, sugg, regex);
    form.append(box);
    if (focused === f.name) {
      input.focus();
      input.setSelectionRange(input.value.length, input.value.length);
    }
  }
  $("depth").textContent = `${state.undo_depth} step(s) to undo`;
  $("undo").disabled = state.undo_depth === 0;
  renderInspect();
}

function renderInspect() {
  const v = $("inspect-var").value;
  if (!v) return;
  try {
    $("inspect").textContent = conf.inspect(v);
  } catch (e) {
    $("inspect").textContent = String(e.message ?? e);
  }
}

function load(text) {
  try {
    const next = new Configurator(text);
    conf?.free();
    conf = next;
  } catch (e) {
    showError(e);
    return;
  }
  showError(null);
  const select = $("inspect-var");
  select.replaceChildren(...conf.variables().map((v) => Object.assign(document.createElement("option"), { value: v, textContent: v })));
  render();
}

await init();
$("problem").value = JSON.stringify(INTRO, null, 2);
$("load").addEventListener("click", () => load($("problem").value));
$("undo").addEventListener("click", () => act(() => conf.undo()));
$("reset").addEventListener("click", () => act(() => conf.reset()));
$("inspect-var").addEventListener("change", renderInspect);
load($("problem").value);
