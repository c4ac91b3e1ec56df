/* gmlsat: satisfiability toolkit for graded modal logic.
 *
 * C interface over the C++ core: opaque handles, integer status codes.
 * Every function returns GMLSAT_OK on success; on failure it returns an
 * error code and leaves a message readable through gmlsat_last_error()
 * until the next call on the same thread. Out-parameters are written only
 * on success. Strings and handles returned by the library are owned by the
 * caller and released with the matching *_free function.
 */
#ifndef GMLSAT_H
#define GMLSAT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gmlsat_formula gmlsat_formula;
typedef struct gmlsat_model gmlsat_model;

/* status codes */
#define GMLSAT_OK 0
#define GMLSAT_ERR_PARSE 1
#define GMLSAT_ERR_INVALID 2
#define GMLSAT_ERR_RESOURCE 3
#define GMLSAT_ERR_INTERNAL 4

/* verdicts */
#define GMLSAT_SAT 0
#define GMLSAT_UNSAT 1
#define GMLSAT_UNKNOWN 2

/* frame class bits */
#define GMLSAT_FRAME_RFL 1u
#define GMLSAT_FRAME_SER 2u
#define GMLSAT_FRAME_SYM 4u
#define GMLSAT_FRAME_TR 8u
#define GMLSAT_FRAME_EUCL 16u

const char* gmlsat_last_error(void);
const char* gmlsat_version(void);

void gmlsat_string_free(char* s);

/* -- formulas ----------------------------------------------------------- */

int gmlsat_formula_parse(const char* text, gmlsat_formula** out);
void gmlsat_formula_free(gmlsat_formula* f);
int gmlsat_formula_render(const gmlsat_formula* f, char** out);
int gmlsat_formula_size(const gmlsat_formula* f, uint64_t* out);

/* Normal-form rewrite for transitive frames, as a formula. */
int gmlsat_formula_normal_form(const gmlsat_formula* f, gmlsat_formula** out);

/* One-variable counting translation; frames must not include Eucl. */
int gmlsat_formula_c1(const gmlsat_formula* f, unsigned frames, char** out);

/* -- models ------------------------------------------------------------- */

int gmlsat_model_from_json(const char* json, gmlsat_model** out);
int gmlsat_model_to_json(const gmlsat_model* m, char** out);
int gmlsat_model_to_dot(const gmlsat_model* m, char** out);
void gmlsat_model_free(gmlsat_model* m);
int gmlsat_model_world_count(const gmlsat_model* m, uint32_t* out);

/* world == NULL checks at the designated world. */
int gmlsat_model_check(const gmlsat_model* m, const char* world,
                       const gmlsat_formula* f, int* out_truth);
int gmlsat_model_frame_properties(const gmlsat_model* m, unsigned* out_frames);

/* -- solving ------------------------------------------------------------ */

/* cap/seed of 0 pick the defaults. model_out may be NULL; on SAT with a
 * non-NULL model_out, *model_out receives a verified model. On UNKNOWN,
 * reason_out (when non-NULL) receives an explanation. */
int gmlsat_solve(const gmlsat_formula* f, unsigned frames, uint32_t cap,
                 uint64_t seed, int* out_verdict, gmlsat_model** model_out,
                 char** reason_out);

/* Exhaustive search up to max_size worlds; SAT or UNKNOWN. */
int gmlsat_oracle(const gmlsat_formula* f, unsigned frames, uint32_t max_size,
                  int* out_verdict, gmlsat_model** model_out);

/* Shrinks a transitive model of f to the bounded-size witness. */
int gmlsat_minimize(const gmlsat_model* m, const gmlsat_formula* f,
                    gmlsat_model** out);

/* Grid-tiling reduction over the instance JSON
 * {"colors":[...], "H":[...], "V":[...], "n":1, "initial":[...]}. */
int gmlsat_tiling_reduction(const char* tiling_json, gmlsat_formula** out);

#ifdef __cplusplus
}
#endif

#endif /* GMLSAT_H */
