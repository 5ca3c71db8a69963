/**
 * Normalization of TIMEX3-style values into plain ISO timestamps.
 *
 * Downstream time features parse timex values with a strict ISO parser, so
 * everything fuzzier than a calendar date has to be pinned down here: part-of
 * -day suffixes become fixed clock times, week/month/year granularities snap
 * to their first instant, and reference values resolve against the document's
 * publish date. Values that cannot be pinned down are dropped by the caller;
 * normalizeTimex reports them as null.
 */

const PART_OF_DAY: Record<string, string> = {
  MO: "09:00",
  AF: "15:00",
  EV: "19:00",
  NI: "23:00",
};

const pad = (n: number) => String(n).padStart(2, "0");

function formatDate(d: Date): string {
  return `${d.getUTCFullYear()}-${pad(d.getUTCMonth() + 1)}-${pad(d.getUTCDate())}`;
}

export function formatTimestamp(d: Date): string {
  return `${formatDate(d)}T${pad(d.getUTCHours())}:${pad(d.getUTCMinutes())}`;
}

function validDate(year: number, month: number, day: number): boolean {
  const d = new Date(Date.UTC(year, month - 1, day));
  return d.getUTCFullYear() === year && d.getUTCMonth() === month - 1 && d.getUTCDate() === day;
}

/**
 * Monday 00:00 of ISO week `week` of ISO year `year`, or null when the year
 * has no such week. ISO weeks start on Monday and week 1 is the week holding
 * January 4th.
 */
export function isoWeekMonday(year: number, week: number): Date | null {
  if (week < 1 || week > 53) return null;
  const jan4 = new Date(Date.UTC(year, 0, 4));
  const weekday = jan4.getUTCDay() === 0 ? 7 : jan4.getUTCDay();
  const monday = new Date(jan4.getTime() - (weekday - 1) * 86400000 + (week - 1) * 7 * 86400000);
  if (week === 53) {
    // A year has week 53 only when the next year's week 1 starts later.
    const next = isoWeekMonday(year + 1, 1);
    if (next !== null && monday.getTime() >= next.getTime()) return null;
  }
  return monday;
}

/**
 * Returns the normalized "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM" form, or null
 * when the value cannot be resolved (placeholder digits, durations, reference
 * values without a publish date, invalid calendar dates).
 */
export function normalizeTimex(value: string, publishDate?: Date): string | null {
  let m = value.match(/^(\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2})$/);
  if (m) {
    const [y, mo, d, h, mi] = m.slice(1).map(Number);
    return validDate(y, mo, d) && h < 24 && mi < 60 ? value : null;
  }

  m = value.match(/^(\d{4})-(\d{2})-(\d{2})T(MO|AF|EV|NI)$/);
  if (m) {
    const [y, mo, d] = m.slice(1, 4).map(Number);
    if (!validDate(y, mo, d)) return null;
    return `${m[1]}-${m[2]}-${m[3]}T${PART_OF_DAY[m[4]]}`;
  }

  m = value.match(/^(\d{4})-(\d{2})-(\d{2})$/);
  if (m) {
    const [y, mo, d] = m.slice(1).map(Number);
    return validDate(y, mo, d) ? value : null;
  }

  m = value.match(/^(\d{4})-W(\d{2})$/);
  if (m) {
    const monday = isoWeekMonday(Number(m[1]), Number(m[2]));
    return monday === null ? null : `${formatDate(monday)}T00:00`;
  }

  m = value.match(/^(\d{4})-(\d{2})$/);
  if (m) {
    const [y, mo] = m.slice(1).map(Number);
    return mo >= 1 && mo <= 12 ? `${m[1]}-${m[2]}-01T00:00` : null;
  }

  if (/^\d{4}$/.test(value)) return `${value}-01-01T00:00`;

  if (value === "PRESENT_REF") {
    return publishDate === undefined ? null : formatTimestamp(publishDate);
  }

  // Everything else: underspecified placeholders (XXXX-..), durations (P1D),
  // bare times, PAST_REF/FUTURE_REF with no anchor offset.
  return null;
}
