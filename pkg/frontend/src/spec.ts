import { z } from 'zod';

/** Declarative description of one figure: inputs, kind, ranges, output path. */
export const figureSpecSchema = z.object({
  kind: z.enum(['dynamics', 'colormap', 'sweep']),
  input: z.string(),
  output: z.string(),
  title: z.string().optional(),
  xLabel: z.string().optional(),
  yLabel: z.string().optional(),
  /** Data range of the x axis; defaults to the CSV extent. */
  xRange: z.tuple([z.number(), z.number()]).optional(),
  /** Data range of the y axis; defaults to the CSV extent. */
  yRange: z.tuple([z.number(), z.number()]).optional(),
  /** Colormap value range; concurrence-style maps are fixed to [0, 1]. */
  valueRange: z.tuple([z.number(), z.number()]).default([0, 1]),
  /** Column plotted by the colormap kind. */
  valueColumn: z.string().default('b_final'),
  /** Plot width/height in px (fixed style, no timestamps: deterministic). */
  width: z.number().int().positive().default(640),
  height: z.number().int().positive().default(420),
});

export type FigureSpec = z.infer<typeof figureSpecSchema>;

export class SpecError extends Error {}

export function parseFigureSpec(doc: unknown): FigureSpec {
  const res = figureSpecSchema.safeParse(doc);
  if (!res.success) {
    const issues = res.error.issues
      .map((i) => `${i.path.join('.') || '<root>'}: ${i.message}`)
      .join('; ');
    throw new SpecError(`invalid figure spec: ${issues}`);
  }
  return res.data;
}
