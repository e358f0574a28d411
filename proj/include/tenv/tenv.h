/* Stable C interface to the tensor-envelope workbench.
 *
 * The library computes Hom-spaces of relations between finite sets or
 * F_q vector spaces, degree-weighted composition, Gram determinants and
 * obstruction scalars, tensor radicals, semisimplicity censuses, and
 * specializations along uniform functors. Requests are JSON scenes
 * (schema/scene.schema.json); results are pre-rendered reports.
 *
 * Every entry point is reentrant. Handles are opaque and owned by the
 * caller until passed to the matching _free function. Status codes mirror
 * the command-line exit codes:
 *   0  success
 *   2  malformed input (schema violation, unknown backend or command)
 *   3  a configured resource bound was exceeded (the message names the
 *      environment variable that lifts it)
 *   4  a mathematical contract was violated
 */
#ifndef TENV_H
#define TENV_H

#ifndef TENV_API
#if defined(_WIN32)
#define TENV_API
#else
#define TENV_API __attribute__((visibility("default")))
#endif
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  TENV_OK = 0,
  TENV_E_SCHEMA = 2,
  TENV_E_RESOURCE = 3,
  TENV_E_CONTRACT = 4
};

typedef struct tenv_scene tenv_scene;
typedef struct tenv_report tenv_report;

TENV_API const char* tenv_version(void);

/* NULL-terminated list of the known command names. */
TENV_API const char* const* tenv_commands(void);

/* Parses and validates a JSON scene. On success stores an owned handle in
 * *out and returns TENV_OK. On failure returns a status code and, when err
 * is non-NULL, stores an owned diagnostic string in *err (release it with
 * tenv_string_free); *out is left untouched. */
TENV_API int tenv_scene_parse(const char* json_text, tenv_scene** out,
                              char** err);
TENV_API void tenv_scene_free(tenv_scene* scene);

/* Runs one command against a parsed scene. Identical scenes and commands
 * produce byte-identical reports. Error handling as in tenv_scene_parse. */
TENV_API int tenv_execute(const tenv_scene* scene, const char* command,
                          tenv_report** out, char** err);
TENV_API void tenv_report_free(tenv_report* report);

/* 0, or 4 when the command completed but reached a negative mathematical
 * verdict (a failed axiom table, a census mismatch). The CLI exits with
 * this code after printing the report. */
TENV_API int tenv_report_code(const tenv_report* report);

/* Rendered report bytes; format is "json", "tsv" or "text", and NULL picks
 * the scene's own format field (default json). Returns NULL for an unknown
 * format name. The pointer stays valid until the report is freed. */
TENV_API const char* tenv_report_render(const tenv_report* report,
                                        const char* format);

TENV_API void tenv_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* TENV_H */
