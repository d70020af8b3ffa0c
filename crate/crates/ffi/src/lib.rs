//! C ABI surface over the storshare library.
//!
//! Handles are opaque pointers created and destroyed by the matching
//! `_new`/`_free` pair. Result-returning calls hand back JSON documents as
//! newly allocated C strings; free them with [`storshare_string_free`].

use chrono::NaiveDate;
use libc::{c_char, c_double, c_int};
use std::ffi::{CStr, CString};
use std::ptr;

use storshare::game;
use storshare::model::{CommunityDay, HouseholdDay};
use storshare::settlement::settle_day;
use storshare::tariff::Tariff;

/// Status codes returned by fallible calls.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StorshareStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidTariff = 3,
    InvalidHousehold = 4,
    InvalidCommunity = 5,
    InvalidDate = 6,
    EnumerationCapExceeded = 7,
    InternalError = 8,
}

/// Opaque tariff handle.
pub struct StorshareTariff(Tariff);

/// Opaque community-day builder handle.
pub struct StorshareCommunity {
    date: NaiveDate,
    households: Vec<HouseholdDay>,
}

/// Creates a tariff handle from the four prices. Never fails; validate with
/// [`storshare_tariff_validate`]. Free with [`storshare_tariff_free`].
#[no_mangle]
pub extern "C" fn storshare_tariff_new(
    lambda_h: c_double,
    lambda_l: c_double,
    mu_h: c_double,
    mu_l: c_double,
) -> *mut StorshareTariff {
    Box::into_raw(Box::new(StorshareTariff(Tariff::new(
        lambda_h, lambda_l, mu_h, mu_l,
    ))))
}

/// Returns `Ok` when the tariff satisfies all pricing preconditions.
///
/// # Safety
/// `tariff` must be a live handle from [`storshare_tariff_new`].
#[no_mangle]
pub unsafe extern "C" fn storshare_tariff_validate(
    tariff: *const StorshareTariff,
) -> StorshareStatus {
    let Some(t) = tariff.as_ref() else {
        return StorshareStatus::NullPointer;
    };
    if t.0.is_valid() {
        StorshareStatus::Ok
    } else {
        StorshareStatus::InvalidTariff
    }
}

/// # Safety
/// `tariff` must come from [`storshare_tariff_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn storshare_tariff_free(tariff: *mut StorshareTariff) {
    if !tariff.is_null() {
        drop(Box::from_raw(tariff));
    }
}

/// Creates an empty community for the given calendar day. Free with
/// [`storshare_community_free`].
#[no_mangle]
pub extern "C" fn storshare_community_new(
    year: c_int,
    month: c_int,
    day: c_int,
) -> *mut StorshareCommunity {
    let Some(date) = NaiveDate::from_ymd_opt(year, month as u32, day as u32) else {
        return ptr::null_mut();
    };
    Box::into_raw(Box::new(StorshareCommunity {
        date,
        households: Vec::new(),
    }))
}

/// Adds one household: peak/off-peak consumption, capacity (kWh) and the
/// amortized daily capital price per kWh of capacity.
///
/// # Safety
/// `community` must be a live handle and `id` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn storshare_community_add_household(
    community: *mut StorshareCommunity,
    id: *const c_char,
    peak_kwh: c_double,
    offpeak_kwh: c_double,
    capacity_kwh: c_double,
    capital_rate: c_double,
) -> StorshareStatus {
    let Some(c) = community.as_mut() else {
        return StorshareStatus::NullPointer;
    };
    if id.is_null() {
        return StorshareStatus::NullPointer;
    }
    let Ok(id) = CStr::from_ptr(id).to_str() else {
        return StorshareStatus::InvalidUtf8;
    };
    match HouseholdDay::new(id, peak_kwh, offpeak_kwh, capacity_kwh, capital_rate) {
        Ok(h) => {
            c.households.push(h);
            StorshareStatus::Ok
        }
        Err(_) => StorshareStatus::InvalidHousehold,
    }
}

/// # Safety
/// `community` must come from [`storshare_community_new`] and not be freed
/// twice.
#[no_mangle]
pub unsafe extern "C" fn storshare_community_free(community: *mut StorshareCommunity) {
    if !community.is_null() {
        drop(Box::from_raw(community));
    }
}

fn build_day(c: &StorshareCommunity) -> Result<CommunityDay, StorshareStatus> {
    CommunityDay::new(c.date, c.households.clone()).map_err(|_| StorshareStatus::InvalidCommunity)
}

fn check_tariff(t: &Tariff) -> Result<(), StorshareStatus> {
    if t.is_valid() {
        Ok(())
    } else {
        Err(StorshareStatus::InvalidTariff)
    }
}

fn json_out<T: serde::Serialize>(value: &T, out: *mut *mut c_char) -> StorshareStatus {
    let Ok(text) = serde_json::to_string(value) else {
        return StorshareStatus::InternalError;
    };
    let Ok(cstring) = CString::new(text) else {
        return StorshareStatus::InternalError;
    };
    unsafe { *out = cstring.into_raw() };
    StorshareStatus::Ok
}

/// Computes the core cost allocation and writes it as a JSON string to
/// `out_json` (caller frees with [`storshare_string_free`]).
///
/// # Safety
/// All pointers must be live; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn storshare_allocate_json(
    community: *const StorshareCommunity,
    tariff: *const StorshareTariff,
    out_json: *mut *mut c_char,
) -> StorshareStatus {
    let (Some(c), Some(t)) = (community.as_ref(), tariff.as_ref()) else {
        return StorshareStatus::NullPointer;
    };
    if out_json.is_null() {
        return StorshareStatus::NullPointer;
    }
    if let Err(status) = check_tariff(&t.0) {
        return status;
    }
    let day = match build_day(c) {
        Ok(day) => day,
        Err(status) => return status,
    };
    match game::allocate(&day, &t.0) {
        Ok(alloc) => json_out(&alloc, out_json),
        Err(_) => StorshareStatus::InvalidCommunity,
    }
}

/// Settles the P2P market for the day and writes the trade ledger as JSON.
///
/// # Safety
/// All pointers must be live; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn storshare_settle_day_json(
    community: *const StorshareCommunity,
    tariff: *const StorshareTariff,
    out_json: *mut *mut c_char,
) -> StorshareStatus {
    let (Some(c), Some(t)) = (community.as_ref(), tariff.as_ref()) else {
        return StorshareStatus::NullPointer;
    };
    if out_json.is_null() {
        return StorshareStatus::NullPointer;
    }
    if let Err(status) = check_tariff(&t.0) {
        return status;
    }
    let day = match build_day(c) {
        Ok(day) => day,
        Err(status) => return status,
    };
    match settle_day(&day, &t.0) {
        Ok(ledger) => json_out(&ledger, out_json),
        Err(_) => StorshareStatus::InvalidCommunity,
    }
}

/// Runs the exhaustive core-membership check (`enum_cap` limits the
/// community size) and writes the report as JSON. Returns
/// `EnumerationCapExceeded` for larger communities.
///
/// # Safety
/// All pointers must be live; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn storshare_core_check_json(
    community: *const StorshareCommunity,
    tariff: *const StorshareTariff,
    enum_cap: c_int,
    out_json: *mut *mut c_char,
) -> StorshareStatus {
    let (Some(c), Some(t)) = (community.as_ref(), tariff.as_ref()) else {
        return StorshareStatus::NullPointer;
    };
    if out_json.is_null() || enum_cap < 0 {
        return StorshareStatus::NullPointer;
    }
    if let Err(status) = check_tariff(&t.0) {
        return status;
    }
    let day = match build_day(c) {
        Ok(day) => day,
        Err(status) => return status,
    };
    match game::check_core(&day, &t.0, enum_cap as usize) {
        Ok(report) => json_out(&report, out_json),
        Err(storshare::Error::EnumerationCapExceeded { .. }) => {
            StorshareStatus::EnumerationCapExceeded
        }
        Err(_) => StorshareStatus::InvalidCommunity,
    }
}

/// Frees a string returned by one of the `_json` calls.
///
/// # Safety
/// `s` must originate from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn storshare_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
