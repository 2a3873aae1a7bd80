#ifndef APIMINE_H
#define APIMINE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ApimineStatus {
  APIMINE_STATUS_OK = 0,
  APIMINE_STATUS_NULL_ARGUMENT = 1,
  APIMINE_STATUS_INVALID_UTF8 = 2,
  APIMINE_STATUS_SYNTAX = 3,
  APIMINE_STATUS_ENCODING = 4,
  APIMINE_STATUS_EMPTY_DATASET = 5,
  APIMINE_STATUS_EMPTY_REFERENCE = 6,
  APIMINE_STATUS_DATA = 7,
  APIMINE_STATUS_CONFIG = 8,
  APIMINE_STATUS_IO = 9,
  APIMINE_STATUS_PANIC = 10,
} ApimineStatus;

// Opaque TF-IDF retrieval index.
typedef struct ApimineIndex ApimineIndex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next call into the library on the same thread.
const char *apimine_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void apimine_string_free(char *s);

// Parses one Python source file and writes its (desc, apiseq) pairs as
// JSONL to `*out_jsonl`. No project modules are known, so every absolute
// import counts as an API.
//
// # Safety
// `source` and `path` must be NUL-terminated strings; `out_jsonl` must be
// a valid pointer.
enum ApimineStatus apimine_extract_pairs(const char *source, const char *path, char **out_jsonl);

// Porter stem of a lowercase word.
//
// # Safety
// `word` must be a NUL-terminated string; `out` must be a valid pointer.
enum ApimineStatus apimine_stem(const char *word, char **out);

// Sentence BLEU-4 of two space-separated token streams.
//
// # Safety
// `hyp` and `reference` must be NUL-terminated strings; `out` must be a
// valid pointer.
enum ApimineStatus apimine_sentence_bleu4(const char *hyp, const char *reference, double *out);

// Builds an index from JSONL training pairs.
//
// # Safety
// `train_jsonl` must be a NUL-terminated string; `out` must be a valid pointer.
enum ApimineStatus apimine_index_build(const char *train_jsonl, struct ApimineIndex **out);

// Loads an index file written by `apimine index` or [`apimine_index_save`].
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be a valid pointer.
enum ApimineStatus apimine_index_load(const char *path, struct ApimineIndex **out);

// # Safety
// `index` must come from this library; `path` must be a NUL-terminated string.
enum ApimineStatus apimine_index_save(const struct ApimineIndex *index, const char *path);

// Number of indexed pairs; 0 for a null index.
//
// # Safety
// `index` must be null or come from this library.
size_t apimine_index_len(const struct ApimineIndex *index);

// Top `k` results for `text` as a JSON array of
// `{"rank", "index", "similarity", "apiseq", "desc"}` objects.
//
// # Safety
// `index` must come from this library; `text` must be a NUL-terminated
// string; `out_json` must be a valid pointer.
enum ApimineStatus apimine_index_query(const struct ApimineIndex *index,
                                       const char *text,
                                       size_t k,
                                       char **out_json);

// Releases an index. Null is ignored.
//
// # Safety
// `index` must be null or come from this library, not yet freed.
void apimine_index_free(struct ApimineIndex *index);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* APIMINE_H */
