//! Qubit-level model of the parity code: encoding, the incremental encoder,
//! Z-measurement recovery and the encoded CNOT and `Z_90` procedures.

mod code;
mod register;

pub use code::{
    encode_logical, logical_fidelity, CodeRegister, EncodedQubit, ParityError, CODE_SPACE_TOL,
};
pub use register::{QubitRegister, MAX_QUBITS};
