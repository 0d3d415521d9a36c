#!/usr/bin/env node
/**
 * cdperc-figures <command> ...
 *
 *   region <curve.csv> <refs.csv> <out.svg>
 *   theta  <theta.csv> <out.svg>
 *
 * Renders deterministic SVG figures from the engine's CSV artifacts. On a
 * schema mismatch nothing is written and the exit code is nonzero.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { SchemaError } from "./csv.js";
import { buildRegionScene, renderRegionSvg } from "./region.js";
import { buildThetaScene, renderThetaSvg } from "./theta.js";

const USAGE =
  "usage: cdperc-figures region <curve.csv> <refs.csv> <out.svg>\n" +
  "       cdperc-figures theta <theta.csv> <out.svg>";

export function run(argv: string[]): number {
  try {
    if (argv[0] === "region" && argv.length === 4) {
      const scene = buildRegionScene(
        readFileSync(argv[1], "utf8"),
        readFileSync(argv[2], "utf8"),
      );
      writeFileSync(argv[3], renderRegionSvg(scene));
      return 0;
    }
    if (argv[0] === "theta" && argv.length === 3) {
      const scene = buildThetaScene(readFileSync(argv[1], "utf8"));
      for (const w of scene.warnings) {
        console.error(`warning: ${w}`);
      }
      writeFileSync(argv[2], renderThetaSvg(scene));
      return 0;
    }
    console.error(USAGE);
    return 2;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 1;
    }
    if (err instanceof Error && "code" in err) {
      console.error(err.message);
      return 1;
    }
    throw err;
  }
}

const isMain = process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (isMain) {
  process.exit(run(process.argv.slice(2)));
}
