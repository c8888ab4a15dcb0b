/**
 * Result forms generated from a request's answer schema.
 *
 * A schema is an ordered list of [label, colorset] pairs; every entry
 * becomes one required text field carrying its colorset as the type
 * hint.  Validation runs client-side before any POST: every field must
 * hold a non-blank value, and identifiers keep their surrounding
 * whitespace trimmed off.
 */

import type { SchemaEntry } from "./types.js";

export interface FormField {
  label: string;
  colorset: string;
  value: string;
  error: string | null;
}

export function fieldsFor(schema: SchemaEntry[]): FormField[] {
  return schema.map(([label, colorset]) => ({
    label,
    colorset,
    value: "",
    error: null,
  }));
}

/**
 * Validate in place; returns true when every field is submittable.
 * Blank fields get an error message, valid fields get error cleared.
 */
export function validateFields(fields: FormField[]): boolean {
  let ok = true;
  for (const field of fields) {
    if (field.value.trim() === "") {
      field.error = `${field.label} needs a ${field.colorset} value`;
      ok = false;
    } else {
      field.error = null;
    }
  }
  return ok;
}

/** The outputs object a valid form POSTs, labels mapped to values. */
export function outputsOf(fields: FormField[]): Record<string, string> {
  const outputs: Record<string, string> = {};
  for (const field of fields) {
    outputs[field.label] = field.value.trim();
  }
  return outputs;
}
