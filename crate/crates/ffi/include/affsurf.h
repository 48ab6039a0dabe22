/* C ABI for the affsurf library.
 *
 * Every fallible call returns a status code from the AFFSURF_* list.
 * On failure, affsurf_last_error() returns a message valid until the
 * next library call on the same thread. Strings returned through
 * out-parameters belong to the caller; release them with
 * affsurf_string_free().
 */

#ifndef AFFSURF_H
#define AFFSURF_H

#ifdef __cplusplus
extern "C" {
#endif

#define AFFSURF_OK 0
#define AFFSURF_ERR_INTERNAL 1
#define AFFSURF_ERR_PARSE 2
#define AFFSURF_ERR_TORSION_FREE 3
#define AFFSURF_ERR_NOT_SYMMETRIC 4
#define AFFSURF_ERR_NOT_HOMOGENEOUS 5
#define AFFSURF_ERR_RADICAL 6
#define AFFSURF_ERR_NULL_ARGUMENT 7

/* Opaque connection handle. */
typedef struct AffsurfConn AffsurfConn;

/* Parse a connection file (NUL-terminated UTF-8) into a new handle. */
int affsurf_parse(const char *src, AffsurfConn **out);

/* Release a handle. Accepts NULL. */
void affsurf_free(AffsurfConn *conn);

/* Tensor report (T, R, rho, nabla rho, nabla T) as a JSON string. */
int affsurf_tensors_json(const AffsurfConn *conn, char **out);

/* Normal-form classification as a JSON string. */
int affsurf_classify_json(const AffsurfConn *conn, char **out);

/* Run the verification suite; JSON report with a "status" field.
 * Returns AFFSURF_OK even when individual checks fail. */
int affsurf_verify_paper_json(char **out);

/* Serialize a catalog family as connection-file text. `params` is an
 * optional comma-separated "name=value" list (may be NULL). */
int affsurf_catalog_file(const char *theorem, int family,
                         const char *params, char **out);

/* Message for the most recent failure on this thread ("" after a
 * success). Do not free the returned pointer. */
const char *affsurf_last_error(void);

/* Release a string returned through an out-parameter. Accepts NULL. */
void affsurf_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* AFFSURF_H */
