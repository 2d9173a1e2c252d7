// syllagraph viewer: draws bundle.json and applies the precomputed
// highlight sets on hover. No route computation happens here.
(function () {
  "use strict";

  var SVG_NS = "http://www.w3.org/2000/svg";
  var CELL_W = 180, CELL_H = 90, GUTTER = 40;
  var STROKE = { derivative: "#d62728", common_part: "#1f77b4", perspective: "#2ca02c" };
  var FILL = { as: "#ffe0a3", ad: "#cfe3ff", other: "#e6e6e6" };
  var SIDE_NAMES = { as: "Aggregate supply side", ad: "Aggregate demand side", other: "Other" };
  var KIND_NAMES = { derivative: "Derivative", common_part: "Common part", perspective: "Perspective" };

  var defaults = { hover_delay_ms: 5000, show_edge_notes: true, palette: null };
  var config = Object.assign({}, defaults, window.SYLLAGRAPH_CONFIG || {});
  if (config.palette) {
    Object.assign(STROKE, config.palette.edges || {});
    Object.assign(FILL, config.palette.sides || {});
  }

  function el(name, attrs, ns) {
    var node = ns ? document.createElementNS(ns, name) : document.createElement(name);
    Object.keys(attrs || {}).forEach(function (k) { node.setAttribute(k, attrs[k]); });
    return node;
  }

  function showError(mount, message) {
    mount.textContent = "";
    var panel = el("div", { "class": "sg-error", role: "alert" });
    panel.textContent = "Cannot display this syllabus: " + message;
    mount.appendChild(panel);
  }

  function checkBundle(b) {
    if (!b || typeof b !== "object") return "bundle is not an object";
    if (b.schema_version !== 1) return "unsupported schema_version " + b.schema_version;
    var required = ["graph", "highlights", "stats"];
    for (var i = 0; i < required.length; i++) {
      if (!(required[i] in b)) return "bundle is missing '" + required[i] + "'";
    }
    var nodes = b.graph.nodes || [];
    for (var j = 0; j < nodes.length; j++) {
      if (!b.highlights[nodes[j].id]) return "no highlight entry for node " + nodes[j].id;
    }
    return null;
  }

  function boxOf(node) {
    return { x: GUTTER + node.pos[0] * (CELL_W + GUTTER), y: GUTTER + node.pos[1] * (CELL_H + GUTTER) };
  }

  function clip(a, b) {
    var ax = a.x + CELL_W / 2, ay = a.y + CELL_H / 2;
    var bx = b.x + CELL_W / 2, by = b.y + CELL_H / 2;
    var dx = bx - ax, dy = by - ay;
    var t = Math.min(dx === 0 ? 1e9 : CELL_W / 2 / Math.abs(dx), dy === 0 ? 1e9 : CELL_H / 2 / Math.abs(dy));
    return [ax + t * dx, ay + t * dy, bx - t * dx, by - t * dy];
  }

  function wrap(text, width) {
    var lines = [], line = "";
    text.split(/\s+/).forEach(function (w) {
      if (!w) return;
      if (line && line.length + 1 + w.length > width) { lines.push(line); line = ""; }
      line = line ? line + " " + w : w;
    });
    if (line) lines.push(line);
    return lines;
  }

  function render(bundle, mount) {
    var problem = checkBundle(bundle);
    if (problem) { showError(mount, problem); return null; }
    mount.textContent = "";
    var graph = bundle.graph;
    var maxCol = 0, maxRow = 0;
    graph.nodes.forEach(function (n) { maxCol = Math.max(maxCol, n.pos[0]); maxRow = Math.max(maxRow, n.pos[1]); });
    var width = GUTTER + (maxCol + 1) * (CELL_W + GUTTER);
    var height = GUTTER + (maxRow + 1) * (CELL_H + GUTTER);

    var layout = el("div", { "class": "sg-layout" });
    var canvas = el("div", { "class": "sg-canvas" });
    var svg = el("svg", { viewBox: "0 0 " + width + " " + height, "class": "sg-graph" }, SVG_NS);
    var defs = el("defs", {}, SVG_NS);
    Object.keys(STROKE).forEach(function (kind) {
      var m = el("marker", { id: "sg-arrow-" + kind, viewBox: "0 0 10 10", refX: "10", refY: "5",
        markerWidth: "8", markerHeight: "8", orient: "auto" }, SVG_NS);
      m.appendChild(el("polygon", { points: "0,0 10,5 0,10", fill: STROKE[kind] }, SVG_NS));
      defs.appendChild(m);
    });
    svg.appendChild(defs);

    var byId = {};
    graph.nodes.forEach(function (n) { byId[n.id] = n; });
    var nodeEls = {}, edgeEls = [];

    var edgeLayer = el("g", { "class": "sg-edges" }, SVG_NS);
    graph.edges.forEach(function (e, i) {
      var p = clip(boxOf(byId[e.from]), boxOf(byId[e.to]));
      var g = el("g", { "class": "sg-edge kind-" + e.kind, "data-index": String(i) }, SVG_NS);
      g.appendChild(el("path", { d: "M " + p[0] + " " + p[1] + " L " + p[2] + " " + p[3], fill: "none",
        stroke: STROKE[e.kind], "stroke-width": "2", "marker-end": "url(#sg-arrow-" + e.kind + ")" }, SVG_NS));
      if (e.note && config.show_edge_notes) {
        var t = el("text", { x: (p[0] + p[2]) / 2, y: (p[1] + p[3]) / 2 - 4, "class": "sg-edge-note" }, SVG_NS);
        t.textContent = e.note;
        g.appendChild(t);
      }
      edgeLayer.appendChild(g);
      edgeEls.push(g);
    });

    var nodeLayer = el("g", { "class": "sg-nodes" }, SVG_NS);
    graph.nodes.forEach(function (n) {
      var b = boxOf(n);
      var g = el("g", { "class": "sg-node side-" + n.side, "data-id": n.id, tabindex: "0" }, SVG_NS);
      g.appendChild(el("rect", { x: b.x, y: b.y, width: CELL_W, height: CELL_H, rx: 8, fill: FILL[n.side] }, SVG_NS));
      var lines = wrap(n.title, 26);
      var text = el("text", { x: b.x + CELL_W / 2, y: b.y + CELL_H / 2 - (lines.length - 1) * 6.5 + 4, "class": "sg-title" }, SVG_NS);
      lines.forEach(function (line, i) {
        var span = el("tspan", { x: b.x + CELL_W / 2, dy: i === 0 ? 0 : 13 }, SVG_NS);
        span.textContent = line;
        text.appendChild(span);
      });
      g.appendChild(text);
      if (n.chapters.length) {
        var ch = el("text", { x: b.x + CELL_W - 6, y: b.y + 14, "class": "sg-chapters" }, SVG_NS);
        ch.textContent = n.chapters.join(", ");
        g.appendChild(ch);
      }
      nodeLayer.appendChild(g);
      nodeEls[n.id] = g;
    });
    svg.appendChild(nodeLayer);
    svg.appendChild(edgeLayer);
    canvas.appendChild(svg);
    layout.appendChild(canvas);

    var panel = el("aside", { "class": "sg-panel", "aria-live": "polite" });
    panel.appendChild(legend());
    var details = el("section", { "class": "sg-details" });
    details.textContent = "Click a diagram to list its resources.";
    panel.appendChild(details);
    layout.appendChild(panel);
    mount.appendChild(layout);

    var view = { bundle: bundle, nodes: nodeEls, edges: edgeEls, svg: svg, timer: null };

    Object.keys(nodeEls).forEach(function (id) {
      var g = nodeEls[id];
      g.addEventListener("mouseenter", function () { schedule(view, id); });
      g.addEventListener("mouseleave", function () { cancel(view); });
      g.addEventListener("click", function () { openResources(view, id, details); });
      g.addEventListener("keydown", function (ev) {
        if (ev.key === "Enter") openResources(view, id, details);
      });
    });
    return view;
  }

  function legend() {
    var box = el("section", { "class": "sg-legend" });
    var h = el("h2"); h.textContent = "Legend"; box.appendChild(h);
    var list = el("ul");
    Object.keys(KIND_NAMES).forEach(function (k) {
      var li = el("li", { "class": "sg-legend-kind" });
      var sw = el("span", { "class": "sg-swatch-line" }); sw.style.borderColor = STROKE[k];
      li.appendChild(sw); li.appendChild(document.createTextNode(KIND_NAMES[k] + " relationship"));
      list.appendChild(li);
    });
    Object.keys(SIDE_NAMES).forEach(function (s) {
      var li = el("li", { "class": "sg-legend-side" });
      var sw = el("span", { "class": "sg-swatch-box" }); sw.style.background = FILL[s];
      li.appendChild(sw); li.appendChild(document.createTextNode(SIDE_NAMES[s]));
      list.appendChild(li);
    });
    box.appendChild(list);
    return box;
  }

  function schedule(view, id) {
    cancel(view);
    view.timer = window.setTimeout(function () { view.timer = null; applyHighlight(view, id); },
      Math.max(0, config.hover_delay_ms));
  }

  function cancel(view) {
    if (view.timer !== null) { window.clearTimeout(view.timer); view.timer = null; }
    clearHighlight(view);
  }

  function applyHighlight(view, id) {
    var hs = view.bundle.highlights[id];
    var litNodes = {}, litEdges = {};
    hs.nodes.forEach(function (n) { litNodes[n] = true; });
    hs.edges.forEach(function (e) { litEdges[e] = true; });
    view.svg.classList.add("sg-hovering");
    Object.keys(view.nodes).forEach(function (n) {
      view.nodes[n].classList.toggle("lit", !!litNodes[n]);
      view.nodes[n].classList.toggle("dim", !litNodes[n]);
    });
    view.edges.forEach(function (g, i) {
      g.classList.toggle("lit", !!litEdges[i]);
      g.classList.toggle("dim", !litEdges[i]);
    });
  }

  function clearHighlight(view) {
    view.svg.classList.remove("sg-hovering");
    Object.keys(view.nodes).forEach(function (n) { view.nodes[n].classList.remove("lit", "dim"); });
    view.edges.forEach(function (g) { g.classList.remove("lit", "dim"); });
  }

  function openResources(view, id, details) {
    var graph = view.bundle.graph;
    var node = graph.nodes.filter(function (n) { return n.id === id; })[0];
    details.textContent = "";
    var h = el("h2"); h.textContent = node.title; details.appendChild(h);
    if (node.note) { var p = el("p", { "class": "sg-note" }); p.textContent = node.note; details.appendChild(p); }
    if (!node.resources.length) {
      var none = el("p", { "class": "sg-empty" }); none.textContent = "No resources."; details.appendChild(none);
    }
    ["video", "text", "audio"].forEach(function (kind) {
      var items = node.resources.filter(function (r) { return r.kind === kind; });
      if (!items.length) return;
      var group = el("div", { "class": "sg-group", "data-kind": kind });
      var gh = el("h3"); gh.textContent = kind.charAt(0).toUpperCase() + kind.slice(1); group.appendChild(gh);
      var ul = el("ul");
      items.forEach(function (r) {
        var li = el("li");
        var a = el("a", { href: r.url, target: "_blank", rel: "noopener noreferrer" });
        a.textContent = r.label;
        li.appendChild(a); ul.appendChild(li);
      });
      group.appendChild(ul);
      details.appendChild(group);
    });
    if (node.symbols.length) {
      var meanings = {};
      graph.glossary.forEach(function (s) { meanings[s.key] = s.meaning; });
      var sh = el("h3"); sh.textContent = "Symbols"; details.appendChild(sh);
      var dl = el("ul", { "class": "sg-symbols" });
      node.symbols.forEach(function (k) {
        var li = el("li"); li.textContent = k + " — " + (meanings[k] || "(undefined)");
        dl.appendChild(li);
      });
      details.appendChild(dl);
    }
  }

  function load(mount) {
    var inline = document.getElementById("syllagraph-bundle");
    if (inline && inline.textContent.trim()) {
      try { return Promise.resolve(JSON.parse(inline.textContent)); }
      catch (err) { return Promise.reject(err); }
    }
    return fetch(mount.getAttribute("data-bundle") || "bundle.json").then(function (r) {
      if (!r.ok) throw new Error("HTTP " + r.status);
      return r.json();
    });
  }

  window.syllagraph = { render: render, config: config };

  document.addEventListener("DOMContentLoaded", function () {
    var mount = document.getElementById("syllagraph");
    if (!mount) return;
    load(mount).then(function (b) { render(b, mount); },
      function (err) { showError(mount, String(err && err.message || err)); });
  });
})();
