#ifndef STORSHARE_H
#define STORSHARE_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by fallible calls.
 */
typedef enum StorshareStatus {
  STORSHARE_STATUS_OK = 0,
  STORSHARE_STATUS_NULL_POINTER = 1,
  STORSHARE_STATUS_INVALID_UTF8 = 2,
  STORSHARE_STATUS_INVALID_TARIFF = 3,
  STORSHARE_STATUS_INVALID_HOUSEHOLD = 4,
  STORSHARE_STATUS_INVALID_COMMUNITY = 5,
  STORSHARE_STATUS_INVALID_DATE = 6,
  STORSHARE_STATUS_ENUMERATION_CAP_EXCEEDED = 7,
  STORSHARE_STATUS_INTERNAL_ERROR = 8,
} StorshareStatus;

/**
 * Opaque community-day builder handle.
 */
typedef struct storshare_community_t storshare_community_t;

/**
 * Opaque tariff handle.
 */
typedef struct storshare_tariff_t storshare_tariff_t;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a tariff handle from the four prices. Never fails; validate with
 * [`storshare_tariff_validate`]. Free with [`storshare_tariff_free`].
 */
struct storshare_tariff_t *storshare_tariff_new(double lambda_h,
                                                double lambda_l,
                                                double mu_h,
                                                double mu_l);

/**
 * Returns `Ok` when the tariff satisfies all pricing preconditions.
 *
 * # Safety
 * `tariff` must be a live handle from [`storshare_tariff_new`].
 */
enum StorshareStatus storshare_tariff_validate(const struct storshare_tariff_t *tariff);

/**
 * # Safety
 * `tariff` must come from [`storshare_tariff_new`] and not be freed twice.
 */
void storshare_tariff_free(struct storshare_tariff_t *tariff);

/**
 * Creates an empty community for the given calendar day. Free with
 * [`storshare_community_free`].
 */
struct storshare_community_t *storshare_community_new(int year, int month, int day);

/**
 * Adds one household: peak/off-peak consumption, capacity (kWh) and the
 * amortized daily capital price per kWh of capacity.
 *
 * # Safety
 * `community` must be a live handle and `id` a NUL-terminated string.
 */
enum StorshareStatus storshare_community_add_household(struct storshare_community_t *community,
                                                       const char *id,
                                                       double peak_kwh,
                                                       double offpeak_kwh,
                                                       double capacity_kwh,
                                                       double capital_rate);

/**
 * # Safety
 * `community` must come from [`storshare_community_new`] and not be freed
 * twice.
 */
void storshare_community_free(struct storshare_community_t *community);

/**
 * Computes the core cost allocation and writes it as a JSON string to
 * `out_json` (caller frees with [`storshare_string_free`]).
 *
 * # Safety
 * All pointers must be live; `out_json` must be writable.
 */
enum StorshareStatus storshare_allocate_json(const struct storshare_community_t *community,
                                             const struct storshare_tariff_t *tariff,
                                             char **out_json);

/**
 * Settles the P2P market for the day and writes the trade ledger as JSON.
 *
 * # Safety
 * All pointers must be live; `out_json` must be writable.
 */
enum StorshareStatus storshare_settle_day_json(const struct storshare_community_t *community,
                                               const struct storshare_tariff_t *tariff,
                                               char **out_json);

/**
 * Runs the exhaustive core-membership check (`enum_cap` limits the
 * community size) and writes the report as JSON. Returns
 * `EnumerationCapExceeded` for larger communities.
 *
 * # Safety
 * All pointers must be live; `out_json` must be writable.
 */
enum StorshareStatus storshare_core_check_json(const struct storshare_community_t *community,
                                               const struct storshare_tariff_t *tariff,
                                               int enum_cap,
                                               char **out_json);

/**
 * Frees a string returned by one of the `_json` calls.
 *
 * # Safety
 * `s` must originate from this library and not be freed twice.
 */
void storshare_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STORSHARE_H */
