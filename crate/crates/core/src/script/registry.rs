//! Command names and what the interpreter does with them.

/// How a command name is handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Implemented,
    /// Another name for an implemented command.
    Alias(&'static str),
    /// Graphics command: logged, and image files written for displays.
    Display,
    /// Recognised but not provided; the reason names the group.
    OutOfScope(&'static str),
}

/// The reference command list, `NAME<TAB>description` per line.
pub const CATALOGUE: &str = include_str!("commands.tsv");

pub fn catalogue() -> impl Iterator<Item = (&'static str, &'static str)> {
    CATALOGUE.lines().filter_map(|l| l.split_once('\t'))
}

pub const IMPLEMENTED: &[&str] = &[
    // variables and control
    "KDINVR", "KDMDVR", "KDSUVR", "KDCPVR", "KDRNVR", "KDEXVR", "KDLSVR", "KDPRVR", "KDTVAR", "KDPAUS", "KDSTOP",
    "KDEND", // structures
    "KDTBIN", "KDTBTR", "KDTBNV", "KDTBTV", "KDTPYR", "KDTLIS", "KDLGST", "KDLSST", "KDCPST", "KDDEDS", "KDPRBT",
    "KDPRPY", "KDPRLS", // vectors and matrices
    "KDIRVC", "KDICVC", "KDCIVR", "KDCMCI", "KDMTAN", "KDMTTR", "KDMTRT", "KDMTPR", "KDMTIV", "KDMTOP", "KDMTTP",
    "KDCMTH", // nodes
    "KDCRBT", "KDCRPY", "KDTERM", "KDISOC", "KDRFCT", "KDWFCT", "KDRCOL", "KDWCOL", "KDFIBT", "KDMERG", "KDUNBT",
    "KDDVBT", "KDWHIT", "KDBLAC", "KDDEBT", // construction and set algebra
    "KDAIVT", "KDARVT", "KDARVP", "KDASS", "KDNOT", "KDUNIO", "KDINTR", "KDEXCL", "KDDIFF", "KDEXSL", "KDINSL",
    // inductive limit
    "KDCTIL", "KDAVIL", "KDUNIL", "KDINIL", "KDEXIL", "KDDFIL", // geometry
    "KDTHOM", "KDTRAN", "KDSYMT", "KDRHPD", "KDPLVI", "KDITST", "KDBRLI", "KDSPBT", "KDCOBT", "KDCPOL", "KDPESP",
    "KDTRHP", "KDPOLT", "KDPTTM", // integral
    "KDHYPG", "KDEPIG", "KDFILL", "KDCVXH", // topology
    "KD1ANR", "KD0ANR", "KD1BND", "KD0BND", "KDSCLO", "KD1ERO", "KD0ERO", "KD1DIL", "KD0DIL", "KD1OPE", "KD0OPE",
    "KD1CLO", "KD0CLO", "KD1MDF", "KD0MDF", "KDTHIN", "KDMEDS", "KDIDIM", "KDLBCC", "KD1LAB", "KD0LAB", "KDBSGT",
    "KDEXSG", "KDLLCC", "KD1CLA", "KD0CLA", // attributes
    "KDMOMG", "KDCTRM", "KDNRMG", "KDNRMR", "KDAPRR", "KDEIGT", "KDCOLT", // pyramids
    "KDBTPY", "KDPYBT", "KDSUPY", "KDMIPY", "KDMAPY", "KDCTDP", "KDSCAL", "KD1MFP", "KD0MFP", "KD1EXT", "KD0EXT",
    "KDIMPY", "KDCLAL", "KDDETZ", // files
    "KDRDBT", "KDWRBT", "KDRDPY", "KDWRPY", "KDLSCN", "KDRPYC", "KDEXFL",
];

pub const ALIASES: &[(&str, &str)] = &[
    ("KDCCLB", "KDLBCC"),
    ("KDSGTF", "KDBSGT"),
    ("KDOLAB", "KD0LAB"),
    ("KD1PRL", "KD1EXT"),
    ("KDFEIT", "KDEIGT"),
    ("KDFTHM", "KDTHOM"),
    ("KDNBLCK", "KDBLAC"),
    ("KDITSP", "KDITST"),
    ("KD1EXP", "KD1DIL"),
    ("KD0EXP", "KD0DIL"),
    ("KDDVTN", "KDFIBT"),
    ("KDCVMT", "KD1CLA"),
    ("KDHIPR", "KDRHPD"),
    ("KDPRVA", "KDPLVI"),
    ("KDEXSP", "KDEXSL"),
    ("KDINSP", "KDINSL"),
    ("KDPOLY", "KDCPOL"),
    // Spellings found in the demonstration command file.
    ("KDAPTR", "KDAPRR"),
    ("KDVRCI", "KDIRVC"),
    ("KDEMED", "KDMEDS"),
    ("KDCPYR", "KDCRPY"),
];

pub const DISPLAY: &[&str] = &[
    "KDBLGR", "KDCLGR", "KDCMAP", "KDDE3D", "KDFI3D", "KDIN3D", "KDDSGR", "KDERGR", "KDINGR", "KDIVGR", "KDMSGR",
    "KDMVGR", "KDNWGR", "KDOPGR", "KDOTGR", "KDPYGR", "KDQTGR", "KDRSGR", "KDSWGR", "KDTRGR", "KDWBGR",
];

pub const OUT_OF_SCOPE: &[(&str, &[&str])] = &[
    (
        "double-word memory: nodes live in the hash-consed store",
        &[
            "KDALLO", "KDFREE", "KDWTYP", "KDRTYP", "KDWVAL", "KDRVAL", "KDWLNK", "KDRLNK", "KDRLFT", "KDRRGT",
            "KDWLFT", "KDWRGT", "KDNIL", "KDMDWK", "KDINWK", "KDSON", "KDDRBT",
        ],
    ),
    (
        "generic lists, queues and stacks",
        &[
            "KDCRLS", "KDEMLS", "KDDHLS", "KDINLS", "KDSULS", "KDDELS", "KDCPLI", "KDCRQU", "KDDEQU", "KDDTQU",
            "KDEMQU", "KDFIRS", "KDLAST", "KDCRST", "KDDEST", "KDDTST", "KDEMST", "KDPOP", "KDPUSH", "KDCTST",
            "KDCRCI", "KDDECI", "KDFICI", "KDINCI", "KDPRLC", "KDTLIC",
        ],
    ),
    ("work sessions", &["KDCRWK", "KDRSWK", "KDSUWK", "KDDEWK", "KDSTWK", "KDPRWK", "KDPRDC"]),
    (
        "archive and file management",
        &[
            "KDANIX", "KDCRIX", "KDHSIX", "KDHSPY", "KDSLIX", "KDXTIX", "KDCPFL", "KDDCFL", "KDDCVR", "KDINFL",
            "KDLDFL", "KDLSFC", "KDPRFL", "KDPRHI", "KDRNFC", "KDSUFL", "KDVCFL", "KDVCVR",
        ],
    ),
    ("hyper-plane lists: polytopes carry their own", &["KDCHCI", "KDLOHP", "KDUPHP", "KDTRHH"]),
    ("bit vectors", &["KDEXCI", "KDVBCI"]),
    ("pyramids in inductive limit", &["KDCPIL", "KDVPIL"]),
    ("slices along a segment", &["KDEXTS"]),
    ("maneuvering-area propagation", &["KDCRTM"]),
    ("radiometric trees outside classification", &["KDRADT"]),
];

pub fn classify(name: &str) -> Option<Class> {
    if IMPLEMENTED.contains(&name) {
        return Some(Class::Implemented);
    }
    if let Some(&(_, to)) = ALIASES.iter().find(|(from, _)| *from == name) {
        return Some(Class::Alias(to));
    }
    if DISPLAY.contains(&name) {
        return Some(Class::Display);
    }
    OUT_OF_SCOPE.iter().find(|(_, names)| names.contains(&name)).map(|(why, _)| Class::OutOfScope(why))
}

/// The implemented or display command a name stands for.
pub fn canonical(name: &str) -> Option<&'static str> {
    match classify(name)? {
        Class::Alias(to) => Some(to),
        Class::Implemented | Class::Display => IMPLEMENTED.iter().chain(DISPLAY).find(|n| **n == name).copied(),
        Class::OutOfScope(_) => None,
    }
}
