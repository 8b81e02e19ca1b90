#ifndef DLCALC_H
#define DLCALC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The first three match the CLI exit codes.
 */
typedef enum DlcStatus {
  DLC_STATUS_OK = 0,
  /**
   * The query ran and found a violated identity or closure failure.
   */
  DLC_STATUS_VIOLATION = 1,
  DLC_STATUS_USAGE = 2,
  DLC_STATUS_NULL_ARG = 3,
  DLC_STATUS_UTF8 = 4,
  DLC_STATUS_PARSE = 5,
  DLC_STATUS_MATH = 6,
  DLC_STATUS_PANIC = 7,
} DlcStatus;

/**
 * Opaque session handle.
 */
typedef struct DlcSession DlcSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a session. Release it with [`dlc_session_free`].
 */
struct DlcSession *dlc_session_new(void);

/**
 * # Safety
 * `session` must come from [`dlc_session_new`] and not be used afterwards.
 */
void dlc_session_free(struct DlcSession *session);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string produced by this library, freed once.
 */
void dlc_string_free(char *s);

/**
 * Message for the last failure on this thread, or null. The string is
 * owned by the caller.
 */
char *dlc_last_error_message(void);

/**
 * Generic entry point: `command` is a CLI command name, `input` its
 * positional argument (may be null), `options_json` a JSON object of CLI
 * options (may be null).
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `session` must be live;
 * `out` must be writable.
 */
enum DlcStatus dlc_run(struct DlcSession *session,
                       const char *command,
                       const char *input,
                       const char *options_json,
                       char **out);

/**
 * Normal form of an operation polynomial such as `Q^4 Q^1`.
 *
 * # Safety
 * As for [`dlc_run`].
 */
enum DlcStatus dlc_normalize(struct DlcSession *session, const char *word, char **out);

/**
 * Evaluates `expr` in a model (`A`, `MO`, `MU`; null means `A`). A `cap` of
 * 0 selects the model's default truncation.
 *
 * # Safety
 * As for [`dlc_run`].
 */
enum DlcStatus dlc_act(struct DlcSession *session,
                       const char *model,
                       const char *expr,
                       uint32_t cap,
                       char **out);

/**
 * Checks closure of a subalgebra of `A` under `ops` (null means `Q_1`)
 * through `maxdeg` (0 means 31).
 *
 * # Safety
 * As for [`dlc_run`].
 */
enum DlcStatus dlc_closure(struct DlcSession *session,
                           const char *sub,
                           const char *ops,
                           uint32_t maxdeg,
                           char **out);

/**
 * Runs a verification suite by name, or `all`, at default bounds.
 *
 * # Safety
 * As for [`dlc_run`].
 */
enum DlcStatus dlc_verify(struct DlcSession *session, const char *suite, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DLCALC_H */
