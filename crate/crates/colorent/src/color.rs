use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

/// Plaquette color of a 2-colex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Green, Color::Blue];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Color {
        Self::ALL[i % 3]
    }

    /// Cyclic color shift: red -> green -> blue -> red.
    pub fn bar(self) -> Color {
        Color::from_index(self.index() + 1)
    }

    /// The two colors different from `self`, as (bar, bar-bar).
    pub fn others(self) -> [Color; 2] {
        [self.bar(), self.bar().bar()]
    }

    pub fn letter(self) -> char {
        match self {
            Color::Red => 'r',
            Color::Green => 'g',
            Color::Blue => 'b',
        }
    }

    pub fn from_letter(c: char) -> Option<Color> {
        match c.to_ascii_lowercase() {
            'r' => Some(Color::Red),
            'g' => Some(Color::Green),
            'b' => Some(Color::Blue),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
        };
        f.write_str(s)
    }
}

/// One value per color, indexed by [`Color`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ByColor<T>(pub [T; 3]);

impl<T: Copy> ByColor<T> {
    pub fn splat(v: T) -> Self {
        ByColor([v; 3])
    }

    /// Build from values listed in (red, blue, green) order, the order used on the command line.
    pub fn from_rbg(r: T, b: T, g: T) -> Self {
        let mut out = [r; 3];
        out[Color::Blue.index()] = b;
        out[Color::Green.index()] = g;
        ByColor(out)
    }

    pub fn rbg(&self) -> [T; 3] {
        [self[Color::Red], self[Color::Blue], self[Color::Green]]
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> ByColor<U> {
        ByColor([f(self.0[0]), f(self.0[1]), f(self.0[2])])
    }
}

impl ByColor<u64> {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl<T> Index<Color> for ByColor<T> {
    type Output = T;
    fn index(&self, c: Color) -> &T {
        &self.0[c.index()]
    }
}

impl<T> IndexMut<Color> for ByColor<T> {
    fn index_mut(&mut self, c: Color) -> &mut T {
        &mut self.0[c.index()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bar_is_cyclic_of_order_three() {
        assert_eq!(Color::Red.bar(), Color::Green);
        assert_eq!(Color::Green.bar(), Color::Blue);
        assert_eq!(Color::Blue.bar(), Color::Red);
        for c in Color::ALL {
            assert_eq!(c.bar().bar().bar(), c);
            let [a, b] = c.others();
            assert!(a != c && b != c && a != b);
        }
    }

    #[test]
    fn rbg_order_round_trips() {
        let v = ByColor::from_rbg(1, 2, 3);
        assert_eq!(v[Color::Red], 1);
        assert_eq!(v[Color::Blue], 2);
        assert_eq!(v[Color::Green], 3);
        assert_eq!(v.rbg(), [1, 2, 3]);
    }
}
