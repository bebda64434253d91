/* Compresses a BMP file and restores it.
 * cc roundtrip.c -Iinclude -L../../target/debug -lcrackcode_ffi -lpthread -ldl -lm */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include "crackcode.h"

static unsigned char *slurp(const char *path, size_t *len) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    *len = (size_t)ftell(f);
    rewind(f);
    unsigned char *buf = malloc(*len);
    if (fread(buf, 1, *len, f) != *len) { free(buf); buf = NULL; }
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: %s FILE.bmp\n", argv[0]);
        return 2;
    }
    size_t len;
    unsigned char *bmp = slurp(argv[1], &len);
    if (!bmp) { perror(argv[1]); return 1; }

    CrkBuffer *stream = NULL, *restored = NULL;
    CrkStatus st = crk_compress(bmp, len, &stream);
    if (st != CRK_STATUS_OK) {
        fprintf(stderr, "compress: %s (%s)\n", crk_status_message(st), crk_last_error_message());
        return st;
    }
    st = crk_decompress(crk_buffer_data(stream), crk_buffer_len(stream), &restored);
    if (st != CRK_STATUS_OK) {
        fprintf(stderr, "decompress: %s\n", crk_last_error_message());
        return st;
    }
    int same = crk_buffer_len(restored) == len && memcmp(crk_buffer_data(restored), bmp, len) == 0;
    printf("%zu -> %zu bytes, restored %s\n", len, crk_buffer_len(stream), same ? "identical" : "DIFFERENT");
    crk_buffer_free(stream);
    crk_buffer_free(restored);
    free(bmp);
    return same ? 0 : 20;
}
