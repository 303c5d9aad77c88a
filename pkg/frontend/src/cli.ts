/**
 * Command line: `render --kind heatmap|power --in FILE --out FILE.svg`
 *
 * Exit codes: 0 on success, 1 on schema or rendering failure, 2 on
 * usage errors.
 */

import { render, FigureKind } from "./render";
import { SchemaError } from "./schema";

const USAGE =
  "usage: render --kind heatmap|power --in TABLE.csv --out FIGURE.svg[.png]";

interface Args {
  kind: FigureKind;
  input: string;
  output: string;
}

export function parseArgs(argv: string[]): Args {
  if (argv[0] !== "render") {
    throw new UsageError(`unknown command ${JSON.stringify(argv[0] ?? "")}; ${USAGE}`);
  }
  let kind: string | undefined;
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) {
      throw new UsageError(`missing value for ${flag}; ${USAGE}`);
    }
    switch (flag) {
      case "--kind":
        kind = value;
        break;
      case "--in":
        input = value;
        break;
      case "--out":
        output = value;
        break;
      default:
        throw new UsageError(`unknown flag ${flag}; ${USAGE}`);
    }
  }
  if (kind !== "heatmap" && kind !== "power") {
    throw new UsageError(`--kind must be heatmap or power; ${USAGE}`);
  }
  if (!input || !output) {
    throw new UsageError(`--in and --out are required; ${USAGE}`);
  }
  return { kind, input, output };
}

export class UsageError extends Error {}

export async function main(argv: string[]): Promise<number> {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  try {
    await render({ kind: args.kind, input: args.input, output: args.output });
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
    } else {
      console.error(`error: ${(err as Error).message}`);
    }
    return 1;
  }
  console.log(`${args.kind} figure written to ${args.output}`);
  return 0;
}

if (require.main === module) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
