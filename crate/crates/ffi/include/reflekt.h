/* C interface to the reflekt toolkit. */

#ifndef REFLEKT_H
#define REFLEKT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call.
 */
typedef enum ReflektStatus {
  REFLEKT_STATUS_OK = 0,
  REFLEKT_STATUS_NULL_ARGUMENT = 1,
  REFLEKT_STATUS_INVALID_UTF8 = 2,
  REFLEKT_STATUS_PARSE = 3,
  REFLEKT_STATUS_FIELD = 4,
  REFLEKT_STATUS_CATEGORY = 5,
  REFLEKT_STATUS_AMALGAM = 6,
  REFLEKT_STATUS_GLUE = 7,
  REFLEKT_STATUS_REPRESENTATION = 8,
  REFLEKT_STATUS_USAGE = 9,
  REFLEKT_STATUS_OUT_OF_RANGE = 10,
  REFLEKT_STATUS_PANIC = 11,
} ReflektStatus;

/**
 * Which cone a construction attaches.
 */
typedef enum ReflektDirection {
  /**
   * A new source below the chosen objects.
   */
  REFLEKT_DIRECTION_MINUS = 0,
  /**
   * A new sink above the chosen objects.
   */
  REFLEKT_DIRECTION_PLUS = 1,
} ReflektDirection;

typedef enum ReflektVerdict {
  REFLEKT_VERDICT_PASS = 0,
  REFLEKT_VERDICT_FAIL = 1,
  REFLEKT_VERDICT_UNKNOWN = 2,
} ReflektVerdict;

/**
 * The pushout of a span of finite categories.
 */
typedef struct ReflektAmalgam ReflektAmalgam;

/**
 * A finite category with every morphism enumerated.
 */
typedef struct ReflektCategory ReflektCategory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string.
 */
const char *reflekt_version(void);

/**
 * Message of the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *reflekt_last_error(void);

/**
 * # Safety
 * `s` is null or a string returned by this library and not yet freed.
 */
void reflekt_string_free(char *s);

/**
 * Parse and saturate a `.cat` presentation, allowing at most `bound`
 * morphisms per hom-set.
 *
 * # Safety
 * `src` is a nul-terminated string and `out` points to writable storage.
 */
enum ReflektStatus reflekt_category_parse(const char *src,
                                          uintptr_t bound,
                                          struct ReflektCategory **out);

/**
 * # Safety
 * `c` is null or a handle from this library and not yet freed.
 */
void reflekt_category_free(struct ReflektCategory *c);

/**
 * # Safety
 * `c` is null or a live handle.
 */
uintptr_t reflekt_category_num_objects(const struct ReflektCategory *c);

/**
 * # Safety
 * `c` is null or a live handle.
 */
uintptr_t reflekt_category_num_morphisms(const struct ReflektCategory *c);

/**
 * Index of the object called `name`.
 *
 * # Safety
 * `c` is a live handle, `name` a nul-terminated string, `out` writable.
 */
enum ReflektStatus reflekt_category_object(const struct ReflektCategory *c,
                                           const char *name,
                                           uintptr_t *out);

/**
 * Number of morphisms from object `a` to object `b`.
 *
 * # Safety
 * `c` is a live handle and `out` writable.
 */
enum ReflektStatus reflekt_category_hom_size(const struct ReflektCategory *c,
                                             uintptr_t a,
                                             uintptr_t b,
                                             uintptr_t *out);

/**
 * The category as `.cat` text.
 *
 * # Safety
 * `c` is a live handle and `out` writable.
 */
enum ReflektStatus reflekt_category_text(const struct ReflektCategory *c, char **out);

/**
 * Attach a cone over the objects `ys[0..n]`.
 *
 * # Safety
 * `c` is a live handle, `ys` holds `n` indices, `out` is writable.
 */
enum ReflektStatus reflekt_category_cone(const struct ReflektCategory *c,
                                         const uintptr_t *ys,
                                         uintptr_t n,
                                         enum ReflektDirection dir,
                                         struct ReflektCategory **out);

/**
 * The category with the objects `ys[0..n]` split off along a new source or sink.
 *
 * # Safety
 * `c` is a live handle, `ys` holds `n` indices, `out` is writable.
 */
enum ReflektStatus reflekt_category_separate(const struct ReflektCategory *c,
                                             const uintptr_t *ys,
                                             uintptr_t n,
                                             enum ReflektDirection dir,
                                             struct ReflektCategory **out);

/**
 * Pushout of a span given as span-file text.
 *
 * # Safety
 * `src` is a nul-terminated string and `out` writable.
 */
enum ReflektStatus reflekt_amalgam_parse(const char *src,
                                         uintptr_t bound,
                                         struct ReflektAmalgam **out);

/**
 * # Safety
 * `a` is null or a handle from this library and not yet freed.
 */
void reflekt_amalgam_free(struct ReflektAmalgam *a);

/**
 * The pushout category as a new handle.
 *
 * # Safety
 * `a` is a live handle and `out` writable.
 */
enum ReflektStatus reflekt_amalgam_category(const struct ReflektAmalgam *a,
                                            struct ReflektCategory **out);

/**
 * Decide whether two words such as `"X:f,Y:g"` name the same morphism,
 * searching words up to `depth` entries when no normal form is available.
 *
 * # Safety
 * `a` is a live handle, both words are nul-terminated, `out` writable.
 */
enum ReflektStatus reflekt_amalgam_equal(const struct ReflektAmalgam *a,
                                         const char *w1,
                                         const char *w2,
                                         uintptr_t depth,
                                         enum ReflektVerdict *out);

/**
 * Reflect a complex of representations given as `.crep` text. `Minus`
 * takes a complex over the source cone to one over the sink cone and
 * `Plus` goes back.
 *
 * # Safety
 * `c` is a live handle, `ys` holds `n` indices, `crep` is nul-terminated
 * and `out` writable.
 */
enum ReflektStatus reflekt_reflect(const struct ReflektCategory *c,
                                   const uintptr_t *ys,
                                   uintptr_t n,
                                   enum ReflektDirection dir,
                                   const char *crep,
                                   char **out);

/**
 * Run a named check suite. A `count` of zero selects the default size.
 * When `json` is non-null it receives the full outcome as JSON.
 *
 * # Safety
 * `name` is nul-terminated, `verdict` writable, `json` null or writable.
 */
enum ReflektStatus reflekt_run_suite(const char *name,
                                     uint64_t seed,
                                     uintptr_t count,
                                     enum ReflektVerdict *verdict,
                                     char **json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REFLEKT_H */
