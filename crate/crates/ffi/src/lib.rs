//! C ABI over the `ncps` library.
//!
//! Models and Wigner functions are exposed as opaque heap handles. Every
//! fallible call returns an [`NcpsStatus`] whose numeric values match the CLI
//! exit codes; the message of the most recent failure on the calling thread is
//! available from [`ncps_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ncps::entropy::{entanglement, renyi_numeric, tsallis_numeric, von_neumann_numeric, EntropyKind};
use ncps::moments::Subsystem;
use ncps::wigner::{energy, reduced_ground_state, wigner_state, WignerState};
use ncps::{derive, DerivedQuantities, Error, ModelParams};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcpsStatus {
    Ok = 0,
    /// A numerical domain or consistency failure.
    Failed = 1,
    InvalidParameters = 2,
    /// Unsupported order, index out of range, or request outside the model.
    Unsupported = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcpsEntropyKind {
    Renyi = 0,
    Tsallis = 1,
    VonNeumann = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcpsMethod {
    ClosedForm = 0,
    StarPowerNumeric = 1,
}

/// Derived scalars of a model.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NcpsDerived {
    pub eta: f64,
    pub delta: f64,
    pub c: f64,
    pub h_plus: f64,
    pub h_minus: f64,
    pub lambda: f64,
    pub u: f64,
    pub v: f64,
    pub theta: f64,
}

/// Opaque model handle.
pub struct NcpsModel {
    params: ModelParams,
    derived: DerivedQuantities,
}

/// Opaque handle to a Wigner eigenfunction W_ij.
pub struct NcpsWigner {
    state: WignerState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NcpsStatus {
    match e {
        Error::InvalidParameters(_) | Error::Config(_) => NcpsStatus::InvalidParameters,
        Error::UnsupportedOrder(_) | Error::Unsupported(_) | Error::OutOfRange(_) => NcpsStatus::Unsupported,
        Error::Domain(_) | Error::Consistency(_) | Error::Io(_) => NcpsStatus::Failed,
    }
}

fn guard(f: impl FnOnce() -> Result<(), NcpsStatus>) -> NcpsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NcpsStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_last_error("internal panic".into());
            NcpsStatus::Panic
        }
    }
}

fn check<T>(r: ncps::Result<T>) -> Result<T, NcpsStatus> {
    r.map_err(|e| {
        let status = status_of(&e);
        set_last_error(e.to_string());
        status
    })
}

fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, NcpsStatus> {
    // SAFETY: callers pass either null or a pointer obtained from this library.
    unsafe { p.as_ref() }.ok_or_else(|| {
        set_last_error(format!("{name} is null"));
        NcpsStatus::NullPointer
    })
}

fn write_out<T>(out: *mut T, value: T) -> Result<(), NcpsStatus> {
    if out.is_null() {
        set_last_error("output pointer is null".into());
        return Err(NcpsStatus::NullPointer);
    }
    // SAFETY: out is non-null and points to writable storage owned by the caller.
    unsafe { out.write(value) };
    Ok(())
}

/// Message of the last failed call on this thread, or null if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ncps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a model; release it with `ncps_model_free`.
#[no_mangle]
pub extern "C" fn ncps_model_new(
    hbar: f64,
    mass: f64,
    omega: f64,
    mu: f64,
    nu: f64,
    out: *mut *mut NcpsModel,
) -> NcpsStatus {
    guard(|| {
        if out.is_null() {
            set_last_error("output pointer is null".into());
            return Err(NcpsStatus::NullPointer);
        }
        let params = check(ModelParams::new(hbar, mass, omega, mu, nu))?;
        let derived = check(derive(&params))?;
        write_out(out, Box::into_raw(Box::new(NcpsModel { params, derived })))
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle from `ncps_model_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ncps_model_free(model: *mut NcpsModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

#[no_mangle]
pub extern "C" fn ncps_model_derived(model: *const NcpsModel, out: *mut NcpsDerived) -> NcpsStatus {
    guard(|| {
        let d = deref(model, "model")?.derived;
        write_out(
            out,
            NcpsDerived {
                eta: d.eta,
                delta: d.delta,
                c: d.c,
                h_plus: d.h_plus,
                h_minus: d.h_minus,
                lambda: d.lambda,
                u: d.u,
                v: d.v,
                theta: d.theta,
            },
        )
    })
}

/// Writes true when μν lies close to the ħ² boundary.
#[no_mangle]
pub extern "C" fn ncps_model_near_singular(model: *const NcpsModel, out: *mut bool) -> NcpsStatus {
    guard(|| write_out(out, deref(model, "model")?.params.near_singular()))
}

/// Energy E_ij in the units of the model.
#[no_mangle]
pub extern "C" fn ncps_energy(model: *const NcpsModel, i: u32, j: u32, out: *mut f64) -> NcpsStatus {
    guard(|| {
        let m = deref(model, "model")?;
        write_out(out, check(energy(i, j, &m.params))?)
    })
}

/// Ground-state entanglement entropy in nats.
///
/// `order` is ignored for the von Neumann kind; Rényi order 1 and Tsallis
/// order 1 also give the von Neumann value.
#[no_mangle]
pub extern "C" fn ncps_entropy(
    model: *const NcpsModel,
    kind: NcpsEntropyKind,
    order: u32,
    method: NcpsMethod,
    out: *mut f64,
) -> NcpsStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let (kind, order) = match kind {
            NcpsEntropyKind::Renyi => (EntropyKind::Renyi, order),
            NcpsEntropyKind::Tsallis => (EntropyKind::Tsallis, order),
            NcpsEntropyKind::VonNeumann => (EntropyKind::VonNeumann, 1),
        };
        let closed = check(entanglement(kind, order, m.derived.lambda))?;
        let value = match method {
            NcpsMethod::ClosedForm => closed.value,
            NcpsMethod::StarPowerNumeric => {
                let reduced = check(reduced_ground_state(&m.params, Subsystem::One))?;
                let r = match (kind, order) {
                    (EntropyKind::Renyi, a) if a >= 2 => renyi_numeric(&reduced, a),
                    (EntropyKind::Tsallis, q) if q >= 2 => tsallis_numeric(&reduced, q),
                    _ => von_neumann_numeric(&reduced),
                };
                check(r)?.value
            }
        };
        write_out(out, value)
    })
}

/// Builds W_ij for the model; release it with `ncps_wigner_free`.
#[no_mangle]
pub extern "C" fn ncps_wigner_new(model: *const NcpsModel, i: u32, j: u32, out: *mut *mut NcpsWigner) -> NcpsStatus {
    guard(|| {
        if out.is_null() {
            set_last_error("output pointer is null".into());
            return Err(NcpsStatus::NullPointer);
        }
        let m = deref(model, "model")?;
        let state = check(wigner_state(i, j, &m.params))?;
        write_out(out, Box::into_raw(Box::new(NcpsWigner { state })))
    })
}

/// Releases a Wigner handle. Null is ignored.
///
/// # Safety
/// `wigner` must be null or a handle from `ncps_wigner_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ncps_wigner_free(wigner: *mut NcpsWigner) {
    if !wigner.is_null() {
        drop(Box::from_raw(wigner));
    }
}

/// Evaluates W_ij at (x1, x2, p1, p2).
#[no_mangle]
pub extern "C" fn ncps_wigner_eval(
    wigner: *const NcpsWigner,
    x1: f64,
    x2: f64,
    p1: f64,
    p2: f64,
    out: *mut f64,
) -> NcpsStatus {
    guard(|| {
        let w = deref(wigner, "wigner")?;
        write_out(out, w.state.function.eval(&[x1, x2, p1, p2]))
    })
}

#[no_mangle]
pub extern "C" fn ncps_wigner_energy(wigner: *const NcpsWigner, out: *mut f64) -> NcpsStatus {
    guard(|| write_out(out, deref(wigner, "wigner")?.state.energy))
}
