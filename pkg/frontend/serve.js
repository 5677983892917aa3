#!/usr/bin/env node
// Static dev server for the worker UI (no bundler needed: the compiled
// dist/ modules load natively). Usage: node serve.js [port]
const http = require("node:http");
const fs = require("node:fs");
const path = require("node:path");

const port = Number(process.argv[2] || 5173);
const root = __dirname;
const types = {
  ".html": "text/html",
  ".js": "text/javascript",
  ".css": "text/css",
  ".map": "application/json",
  ".json": "application/json",
};

http
  .createServer((req, res) => {
    const url = (req.url || "/").split("?")[0];
    const rel = url === "/" ? "index.html" : url.slice(1);
    const file = path.join(root, rel);
    if (!file.startsWith(root) || !fs.existsSync(file) || fs.statSync(file).isDirectory()) {
      res.writeHead(404);
      res.end("not found");
      return;
    }
    res.writeHead(200, { "Content-Type": types[path.extname(file)] || "text/plain" });
    fs.createReadStream(file).pipe(res);
  })
  .listen(port, () => console.log(`worker UI on http://127.0.0.1:${port}`));
