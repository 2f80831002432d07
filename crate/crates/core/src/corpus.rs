//! The bundled example models.

pub const PINGPONG: &str = include_str!("../models/pingpong.sandal");
pub const TWO_PC_NOFAULT: &str = include_str!("../models/2pc_nofault.sandal");
pub const TWO_PC_TIMEOUT: &str = include_str!("../models/2pc_timeout.sandal");
pub const TWO_PC_DROP: &str = include_str!("../models/2pc_drop.sandal");
pub const TWO_PC_SHUTDOWN: &str = include_str!("../models/2pc_shutdown.sandal");
pub const TWO_PC_ALL: &str = include_str!("../models/2pc_all.sandal");
pub const FIFO: &str = include_str!("../models/fifo.sandal");

/// `(file stem, source)` of every bundled model.
pub fn corpus() -> [(&'static str, &'static str); 7] {
    [
        ("pingpong", PINGPONG),
        ("2pc_nofault", TWO_PC_NOFAULT),
        ("2pc_timeout", TWO_PC_TIMEOUT),
        ("2pc_drop", TWO_PC_DROP),
        ("2pc_shutdown", TWO_PC_SHUTDOWN),
        ("2pc_all", TWO_PC_ALL),
        ("fifo", FIFO),
    ]
}
