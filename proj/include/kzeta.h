#ifndef KZETA_H
#define KZETA_H

/* C interface of the kzeta library. Every function returns a kz_status;
 * on failure kz_last_error() describes the error of the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * kz_string_free. */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define KZ_API __declspec(dllexport)
#else
#define KZ_API __attribute__((visibility("default")))
#endif

typedef enum kz_status {
  KZ_OK = 0,
  KZ_INVALID_ARGUMENT = 1, /* bad config, unknown key or command, null pointer */
  KZ_DOMAIN = 2,           /* outside the domain, e.g. Re s <= 1 or a kernel singularity */
  KZ_OVERFLOW = 3,         /* exact arithmetic left the 64-bit range */
  KZ_PARSE = 4,            /* malformed class table or config json */
  KZ_SCHEMA_VERSION = 5,   /* persisted table with an unsupported version */
  KZ_IO = 6,               /* missing or unwritable file */
  KZ_NUMERIC = 7,          /* quadrature, eigenvalue separation, reduction or cusp check failed */
  KZ_INTERNAL = 8
} kz_status;

typedef struct kz_config kz_config;
typedef struct kz_report kz_report;

KZ_API const char* kz_version(void);
KZ_API const char* kz_last_error(void);
KZ_API const char* kz_status_name(kz_status status);
KZ_API void kz_string_free(char* s);

/* Configuration with defaults: pi = 1+i, height 2..14, cutoff 20, s in {2, 3, 2+i}. */
KZ_API kz_status kz_config_new(kz_config** out);
KZ_API void kz_config_free(kz_config* config);
/* Replaces the configuration by a nested json document; absent keys keep defaults. */
KZ_API kz_status kz_config_load_json(kz_config* config, const char* json);
/* Flag name or dotted key; "s" appends, an empty "s" clears the list. */
KZ_API kz_status kz_config_set(kz_config* config, const char* key, const char* value);
KZ_API kz_status kz_config_to_json(const kz_config* config, char** out);
KZ_API kz_status kz_config_hash(const kz_config* config, char** out);

/* Space-separated list of command names. */
KZ_API const char* kz_commands(void);

/* Runs a command. A failed verification still returns KZ_OK with a report
 * whose verdict is fail. */
KZ_API kz_status kz_run(const char* command, const kz_config* config, kz_report** out);
KZ_API void kz_report_free(kz_report* report);
/* 1 when every check passed, 0 otherwise. */
KZ_API kz_status kz_report_verdict(const kz_report* report, int* pass);
/* format: "json" or "csv". */
KZ_API kz_status kz_report_text(const kz_report* report, const char* format, char** out);
KZ_API kz_status kz_report_checks(const kz_report* report, int* total, int* failed);

#ifdef __cplusplus
}
#endif

#endif
