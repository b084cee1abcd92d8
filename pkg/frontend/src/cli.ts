#!/usr/bin/env node
import { SchemaError } from './csv.js';
import { SpecError } from './spec.js';
import { plotFromSpecFile } from './plot.js';

function main(argv: string[]): number {
  const args = argv.slice(2);
  if (args.length !== 2 || args[0] !== '--spec') {
    console.error('usage: qdcascade-plot --spec PATH  (JSON figure spec)');
    return 2;
  }
  try {
    const out = plotFromSpecFile(args[1]);
    console.log(JSON.stringify({ output: out }));
    return 0;
  } catch (err) {
    const kind =
      err instanceof SpecError ? 'spec_error'
      : err instanceof SchemaError ? 'schema_error'
      : 'error';
    const message = err instanceof Error ? err.message : String(err);
    console.error(JSON.stringify({ error: kind, message }));
    return kind === 'error' ? 1 : 2;
  }
}

process.exit(main(process.argv));
