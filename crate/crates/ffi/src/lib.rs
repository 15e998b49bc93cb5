//! C ABI for the triorbit library.
//!
//! Conventions:
//! - Groups are opaque handles created by the `triorbit_construct_*` and
//!   `triorbit_group_from_json` functions and released with
//!   `triorbit_group_free`.
//! - Every fallible function returns a `TriorbitStatus`; on any status
//!   other than `Ok`, `triorbit_last_error` returns a thread-local
//!   NUL-terminated message describing the failure (valid until the next
//!   triorbit call on the same thread).
//! - Strings returned through `char **` out-parameters are owned by the
//!   caller and must be released with `triorbit_string_free`.
//! - The header `include/triorbit.h` is generated from this file at build
//!   time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use triorbit::autos::{is_3orbit, AutError, Strategy};
use triorbit::ffield::FieldCtx;
use triorbit::files::{cocycle_to_json, group_from_json, table_to_json, GroupFile};
use triorbit::gammal::admissible_scan;
use triorbit::groups::{
    mk_extraspecial_q, mk_heisenberg_q, mk_p_epsilon, mk_su3_sylow, mk_suzuki_a,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TriorbitStatus {
    Ok = 0,
    /// A pointer argument was null or a parameter was out of range.
    InvalidArgument = 1,
    /// Input text was not a valid group file.
    ParseError = 2,
    /// The operation is not defined for this kind of group.
    Unsupported = 3,
    /// A size cap or search budget was reached; the answer is unknown.
    Capped = 4,
    /// An internal invariant failed.
    Internal = 5,
}

/// Verdict strategies, mirroring the library's.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TriorbitStrategy {
    /// Catalog generators only; proves "true" or stays unknown.
    Exhibited = 0,
    /// Catalog generators, then the pruned stabilizer search.
    Search = 1,
    /// Brute-force oracle on the Cayley table.
    Oracle = 2,
}

/// Three-valued verdict with the computed orbit count.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct TriorbitVerdict {
    /// 1 = proven 3-orbit, 0 = proven not, -1 = unknown.
    pub is3: i8,
    /// Automorphism orbit count when established, else -1.
    pub orbit_count: i64,
}

/// Opaque group handle.
pub struct TriorbitGroup {
    inner: GroupFile,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap_or_default());
}

fn fail(status: TriorbitStatus, msg: &str) -> TriorbitStatus {
    set_error(msg);
    status
}

/// Last error message for this thread, NUL-terminated. Never null. The
/// pointer stays valid until the next triorbit call on the same thread.
#[no_mangle]
pub extern "C" fn triorbit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn triorbit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn catch<F: FnOnce() -> TriorbitStatus>(f: F) -> TriorbitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(TriorbitStatus::Internal, "caught panic at the FFI boundary"),
    }
}

fn hand_out(g: GroupFile, out: *mut *mut TriorbitGroup) -> TriorbitStatus {
    // Safety: the caller promised a valid out-pointer; checked non-null.
    unsafe { *out = Box::into_raw(Box::new(TriorbitGroup { inner: g })) };
    TriorbitStatus::Ok
}

fn field(q: u64) -> Result<FieldCtx, String> {
    if q < 2 || q > u32::MAX as u64 {
        return Err(format!("q = {q} is not a supported prime power"));
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut n = 0usize;
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
                n += 1;
            }
            if rest != 1 {
                return Err(format!("q = {q} is not a supported prime power"));
            }
            return FieldCtx::new(p as u32, n, None).map_err(|e| e.to_string());
        }
        p += 1;
    }
    FieldCtx::new(q as u32, 1, None).map_err(|e| e.to_string())
}

/// Heisenberg group over F_q, order q^3.
///
/// # Safety
/// `out` must be a valid pointer to a `TriorbitGroup *`.
#[no_mangle]
pub unsafe extern "C" fn triorbit_construct_heisenberg(
    q: u64,
    out: *mut *mut TriorbitGroup,
) -> TriorbitStatus {
    if out.is_null() {
        return fail(TriorbitStatus::InvalidArgument, "out is null");
    }
    catch(|| {
        let ctx = match field(q) {
            Ok(c) => c,
            Err(e) => return fail(TriorbitStatus::InvalidArgument, &e),
        };
        match mk_heisenberg_q(&ctx) {
            Ok(g) => hand_out(GroupFile::Cocycle(g), out),
            Err(e) => fail(TriorbitStatus::InvalidArgument, &e.to_string()),
        }
    })
}

/// Central product of `copies` Heisenberg groups over F_q, order q^(1+2m).
///
/// # Safety
/// `out` must be a valid pointer to a `TriorbitGroup *`.
#[no_mangle]
pub unsafe extern "C" fn triorbit_construct_extraspecial(
    q: u64,
    copies: u32,
    out: *mut *mut TriorbitGroup,
) -> TriorbitStatus {
    if out.is_null() {
        return fail(TriorbitStatus::InvalidArgument, "out is null");
    }
    catch(|| {
        let ctx = match field(q) {
            Ok(c) => c,
            Err(e) => return fail(TriorbitStatus::InvalidArgument, &e),
        };
        match mk_extraspecial_q(&ctx, copies as usize) {
            Ok(g) => hand_out(GroupFile::Cocycle(g), out),
            Err(e) => fail(TriorbitStatus::InvalidArgument, &e.to_string()),
        }
    })
}

/// Sylow p-subgroup of SU(3, q), order q^3.
///
/// # Safety
/// `out` must be a valid pointer to a `TriorbitGroup *`.
#[no_mangle]
pub unsafe extern "C" fn triorbit_construct_su3_sylow(
    q: u64,
    out: *mut *mut TriorbitGroup,
) -> TriorbitStatus {
    if out.is_null() {
        return fail(TriorbitStatus::InvalidArgument, "out is null");
    }
    catch(|| {
        let ctx = match field(q) {
            Ok(c) => c,
            Err(e) => return fail(TriorbitStatus::InvalidArgument, &e),
        };
        match mk_su3_sylow(ctx.p, ctx.n) {
            Ok(g) => hand_out(GroupFile::Cocycle(g), out),
            Err(e) => fail(TriorbitStatus::InvalidArgument, &e.to_string()),
        }
    })
}

/// Twisted group on F_q x F_q with multiplication twisted by x -> x^(p^e).
///
/// # Safety
/// `out` must be a valid pointer to a `TriorbitGroup *`.
#[no_mangle]
pub unsafe extern "C" fn triorbit_construct_suzuki(
    q: u64,
    e: u32,
    out: *mut *mut TriorbitGroup,
) -> TriorbitStatus {
    if out.is_null() {
        return fail(TriorbitStatus::InvalidArgument, "out is null");
    }
    catch(|| {
        let ctx = match field(q) {
            Ok(c) => c,
            Err(e) => return fail(TriorbitStatus::InvalidArgument, &e),
        };
        match mk_suzuki_a(&ctx, e as usize) {
            Ok(g) => hand_out(GroupFile::Cocycle(g), out),
            Err(e) => fail(TriorbitStatus::InvalidArgument, &e.to_string()),
        }
    })
}

/// The order-512 group with center 2^3 and commutator map built from the
/// octonion-style triple structure.
///
/// # Safety
/// `out` must be a valid pointer to a `TriorbitGroup *`.
#[no_mangle]
pub unsafe extern "C" fn triorbit_construct_p_epsilon(
    out: *mut *mut TriorbitGroup,
) -> TriorbitStatus {
    if out.is_null() {
        return fail(TriorbitStatus::InvalidArgument, "out is null");
    }
    catch(|| hand_out(GroupFile::Cocycle(mk_p_epsilon()), out))
}

/// Parse a group file (cocycle or table format) from JSON text.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be a valid
/// pointer to a `TriorbitGroup *`.
#[no_mangle]
pub unsafe extern "C" fn triorbit_group_from_json(
    json: *const c_char,
    out: *mut *mut TriorbitGroup,
) -> TriorbitStatus {
    if json.is_null() || out.is_null() {
        return fail(TriorbitStatus::InvalidArgument, "json or out is null");
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => return fail(TriorbitStatus::InvalidArgument, "json is not UTF-8"),
    };
    catch(|| match group_from_json(text) {
        Ok(g) => hand_out(g, out),
        Err(e) => fail(TriorbitStatus::ParseError, &e.to_string()),
    })
}

/// Serialize the group back to its canonical JSON file format.
///
/// # Safety
/// `group` must be a live handle from this library; `out` must be a valid
/// pointer to a `char *`. The result must be freed with
/// `triorbit_string_free`.
#[no_mangle]
pub unsafe extern "C" fn triorbit_group_to_json(
    group: *const TriorbitGroup,
    out: *mut *mut c_char,
) -> TriorbitStatus {
    if group.is_null() || out.is_null() {
        return fail(TriorbitStatus::InvalidArgument, "group or out is null");
    }
    catch(|| {
        let text = match &(*group).inner {
            GroupFile::Cocycle(g) => cocycle_to_json(g),
            GroupFile::Table(t) => table_to_json(t),
        };
        give_string(&text, out)
    })
}

/// Group order as a decimal or p^k string (orders can exceed 64 bits).
///
/// # Safety
/// `group` must be a live handle; `out` must be a valid pointer to a
/// `char *`. The result must be freed with `triorbit_string_free`.
#[no_mangle]
pub unsafe extern "C" fn triorbit_group_order(
    group: *const TriorbitGroup,
    out: *mut *mut c_char,
) -> TriorbitStatus {
    if group.is_null() || out.is_null() {
        return fail(TriorbitStatus::InvalidArgument, "group or out is null");
    }
    catch(|| give_string(&(*group).inner.order_string(), out))
}

/// Center order for cocycle-format groups, as a p^k string.
///
/// # Safety
/// `group` must be a live handle; `out` must be a valid pointer to a
/// `char *`. The result must be freed with `triorbit_string_free`.
#[no_mangle]
pub unsafe extern "C" fn triorbit_group_center_order(
    group: *const TriorbitGroup,
    out: *mut *mut c_char,
) -> TriorbitStatus {
    if group.is_null() || out.is_null() {
        return fail(TriorbitStatus::InvalidArgument, "group or out is null");
    }
    catch(|| match &(*group).inner {
        GroupFile::Cocycle(g) => give_string(&g.center_order_string(), out),
        GroupFile::Table(_) => fail(
            TriorbitStatus::Unsupported,
            "center order is reported for cocycle-format groups only",
        ),
    })
}

/// Decide whether the group has exactly three automorphism orbits.
///
/// Table-format groups support only the oracle strategy. A `Capped`
/// status means the budget or a size cap was hit: `verdict.is3` is -1 and
/// the question remains open, which callers may treat as a soft failure.
///
/// # Safety
/// `group` must be a live handle; `verdict` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn triorbit_check3(
    group: *const TriorbitGroup,
    strategy: TriorbitStrategy,
    budget: u64,
    verdict: *mut TriorbitVerdict,
) -> TriorbitStatus {
    if group.is_null() || verdict.is_null() {
        return fail(TriorbitStatus::InvalidArgument, "group or verdict is null");
    }
    catch(|| {
        *verdict = TriorbitVerdict { is3: -1, orbit_count: -1 };
        let result = match &(*group).inner {
            GroupFile::Cocycle(g) => {
                let strategy = match strategy {
                    TriorbitStrategy::Exhibited => Strategy::Exhibited,
                    TriorbitStrategy::Search => Strategy::ExhibitedThenSearch,
                    TriorbitStrategy::Oracle => Strategy::Oracle,
                };
                is_3orbit(g, strategy, budget)
            }
            GroupFile::Table(t) => {
                if strategy != TriorbitStrategy::Oracle {
                    return fail(
                        TriorbitStatus::Unsupported,
                        "table-format groups carry no generator catalog; use the oracle",
                    );
                }
                triorbit::autos::table_3orbit(t, &[], budget)
            }
        };
        match result {
            Ok(v) => {
                (*verdict).is3 = match v.is3 {
                    Some(true) => 1,
                    Some(false) => 0,
                    None => -1,
                };
                (*verdict).orbit_count = v.r.map_or(-1, |r| r as i64);
                TriorbitStatus::Ok
            }
            Err(AutError::TooLarge(cap)) => {
                fail(TriorbitStatus::Capped, &format!("size cap {cap} exceeded"))
            }
            Err(AutError::Group(triorbit::groups::GroupError::TooLarge(cap))) => {
                fail(TriorbitStatus::Capped, &format!("size cap {cap} exceeded"))
            }
            Err(AutError::BudgetExhausted { nodes }) => {
                fail(TriorbitStatus::Capped, &format!("budget exhausted after {nodes} nodes"))
            }
            Err(e) => fail(TriorbitStatus::Internal, &e.to_string()),
        }
    })
}

/// Census of dimension-`dim` prime-field subspaces of F_q: counts of
/// subfield-hyperplane content and transitive quotient action, plus
/// witness bases, as a JSON document identical for every `jobs` setting.
///
/// # Safety
/// `out` must be a valid pointer to a `char *`. The result must be freed
/// with `triorbit_string_free`.
#[no_mangle]
pub unsafe extern "C" fn triorbit_scan(
    q: u64,
    dim: u32,
    jobs: u32,
    out: *mut *mut c_char,
) -> TriorbitStatus {
    if out.is_null() {
        return fail(TriorbitStatus::InvalidArgument, "out is null");
    }
    catch(|| {
        let ctx = match field(q) {
            Ok(c) => c,
            Err(e) => return fail(TriorbitStatus::InvalidArgument, &e),
        };
        match admissible_scan(&ctx, dim as usize, jobs.max(1) as usize) {
            Ok(census) => give_string(&triorbit::files::census_to_json(&census), out),
            Err(e) => fail(TriorbitStatus::InvalidArgument, &e.to_string()),
        }
    })
}

fn give_string(text: &str, out: *mut *mut c_char) -> TriorbitStatus {
    match CString::new(text) {
        Ok(s) => {
            // Safety: caller promised a valid out-pointer; checked non-null.
            unsafe { *out = s.into_raw() };
            TriorbitStatus::Ok
        }
        Err(_) => fail(TriorbitStatus::Internal, "interior NUL in output"),
    }
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned through a `char **`
/// out-parameter of this library, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn triorbit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Release a group handle. Null is a no-op.
///
/// # Safety
/// `group` must be a handle previously returned by this library, and must
/// not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn triorbit_group_free(group: *mut TriorbitGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn construct(f: impl FnOnce(*mut *mut TriorbitGroup) -> TriorbitStatus) -> *mut TriorbitGroup {
        let mut g: *mut TriorbitGroup = ptr::null_mut();
        assert_eq!(f(&mut g), TriorbitStatus::Ok);
        assert!(!g.is_null());
        g
    }

    fn take_string(f: impl FnOnce(*mut *mut c_char) -> TriorbitStatus) -> String {
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(f(&mut s), TriorbitStatus::Ok);
        let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
        unsafe { triorbit_string_free(s) };
        text
    }

    #[test]
    fn construct_order_and_verdict() {
        let g = construct(|out| unsafe { triorbit_construct_heisenberg(9, out) });
        assert_eq!(take_string(|out| unsafe { triorbit_group_order(g, out) }), "729");
        assert_eq!(
            take_string(|out| unsafe { triorbit_group_center_order(g, out) }),
            "3^2"
        );
        let mut v = TriorbitVerdict { is3: -1, orbit_count: -1 };
        let st = unsafe { triorbit_check3(g, TriorbitStrategy::Exhibited, 1_000_000, &mut v) };
        assert_eq!(st, TriorbitStatus::Ok);
        assert_eq!(v.is3, 1);
        assert_eq!(v.orbit_count, 3);
        unsafe { triorbit_group_free(g) };
    }

    #[test]
    fn json_round_trip_is_stable() {
        let g = construct(|out| unsafe { triorbit_construct_extraspecial(3, 2, out) });
        let text = take_string(|out| unsafe { triorbit_group_to_json(g, out) });
        let json = CString::new(text.clone()).unwrap();
        let back = construct(|out| unsafe { triorbit_group_from_json(json.as_ptr(), out) });
        let text2 = take_string(|out| unsafe { triorbit_group_to_json(back, out) });
        assert_eq!(text, text2);
        unsafe {
            triorbit_group_free(g);
            triorbit_group_free(back);
        }
    }

    #[test]
    fn errors_set_messages_and_codes() {
        let mut g: *mut TriorbitGroup = ptr::null_mut();
        let st = unsafe { triorbit_construct_heisenberg(12, &mut g) };
        assert_eq!(st, TriorbitStatus::InvalidArgument);
        let msg = unsafe { CStr::from_ptr(triorbit_last_error()) }.to_str().unwrap();
        assert!(msg.contains("not a supported prime power"), "{msg}");
        assert!(g.is_null());

        let st = unsafe { triorbit_construct_heisenberg(9, ptr::null_mut()) };
        assert_eq!(st, TriorbitStatus::InvalidArgument);

        let bad = CString::new("{\"format\":\"nope\"}").unwrap();
        let st = unsafe { triorbit_group_from_json(bad.as_ptr(), &mut g) };
        assert_eq!(st, TriorbitStatus::ParseError);
    }

    #[test]
    fn capped_verdicts_are_soft() {
        let g = construct(|out| unsafe { triorbit_construct_suzuki(6561, 1, out) });
        let mut v = TriorbitVerdict { is3: -1, orbit_count: -1 };
        let st = unsafe { triorbit_check3(g, TriorbitStrategy::Oracle, 1_000_000, &mut v) };
        assert_eq!(st, TriorbitStatus::Capped);
        assert_eq!(v.is3, -1);
        let msg = unsafe { CStr::from_ptr(triorbit_last_error()) }.to_str().unwrap();
        assert!(msg.contains("size cap"), "{msg}");
        unsafe { triorbit_group_free(g) };
    }

    #[test]
    fn scan_census_json() {
        let text = take_string(|out| unsafe { triorbit_scan(81, 2, 2, out) });
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["cells"]["both"], 10);
        assert_eq!(v["cells"]["admissible"], 40);
        let single = take_string(|out| unsafe { triorbit_scan(81, 2, 1, out) });
        assert_eq!(text, single);
    }

    #[test]
    fn frees_accept_null() {
        unsafe {
            triorbit_string_free(ptr::null_mut());
            triorbit_group_free(ptr::null_mut());
        }
        assert!(!triorbit_version().is_null());
    }
}
