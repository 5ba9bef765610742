/* C interface to the workbench. Strings returned through char** are
   heap-allocated JSON and must be released with mw_string_free. */
#ifndef MALTWORK_H
#define MALTWORK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MW_API __declspec(dllexport)
#else
#define MW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* 0 is success; other values match the library error codes */
typedef int mw_status;
enum {
  MW_OK = 0,
  MW_UNKNOWN_OPERATION,
  MW_ARITY_MISMATCH,
  MW_ELEMENT_OUT_OF_RANGE,
  MW_SIZE_OVERFLOW,
  MW_CAP_EXCEEDED,
  MW_NOT_FOUND,
  MW_PARSE_ERROR,
  MW_INVALID_ARGUMENT,
  MW_NOT_MALTSEV,
  MW_NOT_CENTRAL,
  MW_NOT_CENTRAL_SERIES,
  MW_SECTION_FAILURE,
  MW_SIGNATURE_MISMATCH,
  MW_DIVISION_NOT_FOUND,
  MW_NOT_SUPERNILPOTENT,
  MW_CONSTANT_INPUT,
  MW_NORMALIZATION_FAILED,
  MW_VALUE_OUTSIDE_CYCLIC_SUBGROUP,
  MW_CONSTRUCTION_FAILED,
  MW_PRESENTATION_MISMATCH,
  MW_UNSUPPORTED_PRIME,
  MW_SEARCH_SPACE_OVERFLOW,
  MW_LATTICE_OVERFLOW,
  MW_UNKNOWN_SUITE,
  MW_INTERNAL = 100
};

typedef struct mw_caps {
  size_t clone;  /* polynomial clone members; 0 = default */
  size_t search; /* brute-force points; 0 = default */
  uint64_t seed; /* sampled suites */
} mw_caps;

typedef struct mw_algebra mw_algebra;

MW_API const char* mw_version(void);
MW_API const char* mw_status_name(mw_status s);
/* message of the last failure on this thread; "" after success */
MW_API const char* mw_last_error(void);
MW_API void mw_string_free(char* s);

MW_API mw_status mw_algebra_from_json(const char* json, const mw_caps* caps, mw_algebra** out);
MW_API mw_status mw_algebra_load(const char* path, const mw_caps* caps, mw_algebra** out);
MW_API mw_status mw_algebra_bundled(const char* name, const mw_caps* caps, mw_algebra** out);
MW_API void mw_algebra_free(mw_algebra* a);
MW_API size_t mw_algebra_size(const mw_algebra* a);
MW_API mw_status mw_algebra_to_json(const mw_algebra* a, char** out);
MW_API mw_status mw_algebra_hash(const mw_algebra* a, char** out);

/* result sections as JSON objects */
MW_API mw_status mw_analyze(mw_algebra* a, char** out);
MW_API mw_status mw_lattice(mw_algebra* a, char** out);
/* alphas_json: null for every binary pair, else [[blocks…], …] */
MW_API mw_status mw_commutator(mw_algebra* a, const char* alphas_json, char** out);
MW_API mw_status mw_fitting(mw_algebra* a, char** out);
MW_API mw_status mw_supernilpotent(mw_algebra* a, char** out);

/* graph_text: DIMACS or {"vertices","edges"}; cnf_text: DIMACS cnf.
   out receives {"instance": …, "companion": …, "size_report": …}. */
MW_API mw_status mw_reduce_color(mw_algebra* a, const char* graph_text, int compact, char** out);
MW_API mw_status mw_reduce_sat3(mw_algebra* a, const char* cnf_text, int compact, char** out);

/* mode: "csat" or "ceqv" */
MW_API mw_status mw_solve(const char* instance_json, const char* mode, const mw_caps* caps, char** out);
MW_API mw_status mw_verify(const char* suite, const mw_caps* caps, int* passed, char** out);

/* {"manifest": …, "result": result}; input_hashes_json is an object */
MW_API mw_status mw_wrap_report(const char* command, const char* input_hashes_json, const mw_caps* caps,
                                const char* result_json, double seconds, char** out);
/* {"error": {"code", "message"}} for a status and message */
MW_API mw_status mw_error_report(mw_status s, const char* message, char** out);
/* key: value lines */
MW_API mw_status mw_text_summary(const char* report_json, char** out);

/* JSON array of names */
MW_API mw_status mw_bundled_names(char** out);
MW_API mw_status mw_suite_names(char** out);
/* algebra JSON with "name" and, when known, "description" */
MW_API mw_status mw_bundled_json(const char* name, char** out);

#ifdef __cplusplus
}
#endif

#endif
