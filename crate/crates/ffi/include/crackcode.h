#ifndef CRACKCODE_H
#define CRACKCODE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

enum CrkStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  CRK_STATUS_OK = 0,
  CRK_STATUS_IO = 1,
  CRK_STATUS_USAGE = 2,
  CRK_STATUS_BMP_BAD_MAGIC = 3,
  CRK_STATUS_BMP_UNSUPPORTED_COMPRESSION = 4,
  CRK_STATUS_BMP_UNSUPPORTED_DEPTH = 5,
  CRK_STATUS_BMP_TRUNCATED = 6,
  CRK_STATUS_BMP_BAD_HEADER = 7,
  CRK_STATUS_BMP_INVALID_IMAGE = 8,
  CRK_STATUS_STREAM_BAD_MAGIC = 10,
  CRK_STATUS_STREAM_TRUNCATED = 11,
  CRK_STATUS_STREAM_BOUNDS_VIOLATION = 12,
  CRK_STATUS_STREAM_COVERAGE_MISMATCH = 13,
  CRK_STATUS_STREAM_MALFORMED = 14,
  CRK_STATUS_TOO_LARGE = 15,
  CRK_STATUS_WALK_OUT_OF_BOUNDS = 16,
  CRK_STATUS_INCOMPLETE_COVER = 17,
  CRK_STATUS_OVERLAP_WRITE = 18,
  CRK_STATUS_VERIFY_MISMATCH = 20,
  CRK_STATUS_BAD_SPEC = 21,
  CRK_STATUS_RLE = 22,
  // A required pointer argument was NULL.
  CRK_STATUS_NULL_ARGUMENT = 100,
  // Row or column outside the image.
  CRK_STATUS_OUT_OF_RANGE = 101,
  // Internal panic; the call had no effect.
  CRK_STATUS_PANIC = 102,
};
#ifndef __cplusplus
typedef int32_t CrkStatus;
#endif // __cplusplus

// Owned byte buffer returned by the library.
typedef struct CrkBuffer CrkBuffer;

// A parsed BMP image.
typedef struct CrkImage CrkImage;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *crk_version(void);

// Short static description of a status code.
const char *crk_status_message(int32_t status);

// Detail message of the last failed call on this thread. Valid until the
// next failing call on the same thread. Empty if nothing failed yet.
const char *crk_last_error_message(void);

// Compresses a BMP file image into a CRK1 stream.
//
// # Safety
// `bmp` must point to `len` readable bytes (or be NULL with `len == 0`);
// `out` must be a valid pointer to write the result handle to.
CrkStatus crk_compress(const uint8_t *bmp, size_t len, struct CrkBuffer **out);

// Restores the original BMP file from a CRK1 stream.
//
// # Safety
// Same contract as [`crk_compress`].
CrkStatus crk_decompress(const uint8_t *stream, size_t len, struct CrkBuffer **out);

// Chain listing (`row col value codes... -1` per line) of a BMP file or a
// CRK1 stream, as UTF-8 text without a terminating NUL.
//
// # Safety
// Same contract as [`crk_compress`].
CrkStatus crk_dump_text(const uint8_t *data, size_t len, struct CrkBuffer **out);

// # Safety
// `buf` must be NULL or a live handle from this library.
const uint8_t *crk_buffer_data(const struct CrkBuffer *buf);

// # Safety
// `buf` must be NULL or a live handle from this library.
size_t crk_buffer_len(const struct CrkBuffer *buf);

// # Safety
// `buf` must be NULL or a handle from this library not yet freed.
void crk_buffer_free(struct CrkBuffer *buf);

// Parses an uncompressed BMP file.
//
// # Safety
// Same contract as [`crk_compress`].
CrkStatus crk_image_parse(const uint8_t *bmp, size_t len, struct CrkImage **out);

// Width in pixels, or 0 for NULL.
//
// # Safety
// `img` must be NULL or a live handle from this library.
uint32_t crk_image_width(const struct CrkImage *img);

// Height in pixels, or 0 for NULL.
//
// # Safety
// `img` must be NULL or a live handle from this library.
uint32_t crk_image_height(const struct CrkImage *img);

// 1, 4, 8 or 24; 0 for NULL.
//
// # Safety
// `img` must be NULL or a live handle from this library.
uint32_t crk_image_bits_per_pixel(const struct CrkImage *img);

// Pixel value at (`row`, `col`), row 0 at the top: a palette index, or
// `0xRRGGBB` for 24-bit images.
//
// # Safety
// `img` must be a live handle and `value` a valid pointer, or NULL.
CrkStatus crk_image_pixel(const struct CrkImage *img, uint32_t row, uint32_t col, uint32_t *value);

// Number of chains the encoder produces for this image.
//
// # Safety
// `img` must be NULL or a live handle from this library.
size_t crk_image_chain_count(const struct CrkImage *img);

// # Safety
// `img` must be NULL or a handle from this library not yet freed.
void crk_image_free(struct CrkImage *img);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRACKCODE_H */
