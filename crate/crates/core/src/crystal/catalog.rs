//! The 17 plane crystallographic groups, read from bundled data files.

use super::{parse_crystal, CrystalError, CrystalGroup};

macro_rules! entry {
    ($name:literal) => {
        ($name, include_str!(concat!("../../data/wallpaper/", $name, ".crystal")))
    };
}

const SOURCES: [(&str, &str); 17] = [
    entry!("p1"),
    entry!("p2"),
    entry!("pm"),
    entry!("pg"),
    entry!("cm"),
    entry!("pmm"),
    entry!("pmg"),
    entry!("pgg"),
    entry!("cmm"),
    entry!("p4"),
    entry!("p4m"),
    entry!("p4g"),
    entry!("p3"),
    entry!("p3m1"),
    entry!("p31m"),
    entry!("p6"),
    entry!("p6m"),
];

#[derive(Debug, Clone)]
pub struct WallpaperEntry {
    pub name: &'static str,
    pub source: &'static str,
    pub group: CrystalGroup,
}

pub fn wallpaper_catalog() -> Result<Vec<WallpaperEntry>, CrystalError> {
    SOURCES
        .iter()
        .map(|&(name, source)| Ok(WallpaperEntry { name, source, group: parse_crystal(source)? }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::point_group;

    #[test]
    fn point_group_orders() {
        let expected = [1, 2, 2, 2, 2, 4, 4, 4, 4, 4, 8, 8, 3, 6, 6, 6, 12];
        for (e, want) in wallpaper_catalog().unwrap().iter().zip(expected) {
            assert_eq!(e.group.name, e.name);
            assert_eq!(point_group(&e.group).unwrap().order(), want, "{}", e.name);
        }
    }
}
