#!/usr/bin/env node
// Runs a HORN SMT-LIB file through the z3 WASM build (npm i -g z3-solver)
// and prints the verdict (sat / unsat / unknown) on stdout.
"use strict";

const fs = require("fs");
const path = require("path");
const { execSync } = require("child_process");

function findZ3() {
  const candidates = [];
  try {
    candidates.push(path.join(execSync("npm root -g").toString().trim(), "z3-solver"));
  } catch (e) {}
  candidates.push("z3-solver");
  for (const c of candidates) {
    try {
      return require(c);
    } catch (e) {}
  }
  console.error("z3-solver npm package not found (npm install -g z3-solver)");
  process.exit(3);
}

async function main() {
  const file = process.argv[2];
  if (!file) {
    console.error("usage: z3horn.js <file.smt2>");
    process.exit(2);
  }
  const smt = fs.readFileSync(file, "utf8");
  const { init } = findZ3();
  const { Z3 } = await init();
  const cfg = Z3.mk_config();
  const ctx = Z3.mk_context(cfg);
  const out = await Z3.eval_smtlib2_string(ctx, smt);
  const verdict = out
    .split(/\s+/)
    .find((w) => w === "sat" || w === "unsat" || w === "unknown");
  console.log(verdict || "unknown");
  process.exit(0);
}

main().catch((e) => {
  console.error(String(e));
  process.exit(3);
});
