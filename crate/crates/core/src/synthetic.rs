//! Seeded generator of boundary-annotated newswire-like text.
//!
//! Sentences mix honorifics, corporate designators, decimals, initialisms,
//! ellipses and e-mail addresses, including sentence-final abbreviations
//! whose period doubles as the terminator. Every line is one sentence, so the
//! ground truth is known by construction.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::AnnotatedCorpus;

const NAMES: &[&str] = &[
    "Smith", "Jones", "Brown", "Lee", "Garcia", "Miller", "Davis", "Wilson", "Taylor", "Clark",
    "Lewis", "Walker", "Hall", "Young", "King", "Wright", "Lopez", "Hill", "Green", "Adams",
];
const HONORIFICS: &[&str] = &["Mr.", "Mrs.", "Ms.", "Dr.", "Gen.", "Prof.", "Sen.", "Gov."];
const COMPANIES: &[&str] = &[
    "ANLP", "Acme", "Globex", "Initech", "Umbrella", "Stark", "Wayne", "Cyberdyne", "Tyrell",
    "Soylent", "Hooli", "Vandelay", "Monarch", "Oscorp",
];
const DESIGNATORS: &[&str] = &["Corp.", "Inc.", "Co.", "Ltd.", "S.p.A.", "L.L.C."];
const INTRANSITIVE: &[&str] = &[
    "resigned", "retired", "declined", "agreed", "objected", "testified", "left", "returned",
];
const BASE_VERBS: &[&str] = &["approve", "reject", "sign", "review", "delay", "support"];
const NOUNS: &[&str] = &[
    "plan", "deal", "merger", "budget", "contract", "proposal", "offer", "report",
];
const MONTHS: &[&str] = &["Jan.", "Feb.", "Aug.", "Sept.", "Oct.", "Nov.", "Dec."];
const PLACES: &[&str] = &["Washington, D.C.", "the U.S.", "the U.K."];
const MOVES: &[&str] = &["rose", "fell", "climbed", "slipped", "jumped"];
const METRICS: &[&str] = &["Sales", "Profits", "Revenue", "Exports", "Shares"];

struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    fn pick(&mut self, items: &[&'static str]) -> &'static str {
        items.choose(&mut self.rng).copied().unwrap_or("")
    }

    fn decimal(&mut self) -> String {
        let whole = self.rng.random_range(0..40);
        let frac = self.rng.random_range(1..100);
        format!("{whole}.{frac}")
    }

    fn person(&mut self) -> String {
        format!("{} {}", self.pick(HONORIFICS), self.pick(NAMES))
    }

    fn company(&mut self) -> String {
        format!("{} {}", self.pick(COMPANIES), self.pick(DESIGNATORS))
    }

    fn sentence(&mut self) -> String {
        match self.rng.random_range(0..14) {
            0 => format!("{} {}.", self.person(), self.pick(INTRANSITIVE)),
            1 => format!(
                "{} chairman {} {}.",
                self.company(),
                self.person(),
                self.pick(INTRANSITIVE)
            ),
            2 => format!(
                "{} said {} {} {} percent.",
                self.company(),
                self.pick(METRICS).to_lowercase(),
                self.pick(MOVES),
                self.decimal()
            ),
            3 => format!(
                "Shares of {} {} {} % in {} trading.",
                self.company(),
                self.pick(MOVES),
                self.decimal(),
                self.pick(MONTHS)
            ),
            4 => format!(
                "The U.S. economy grew {} percent last year, {} said.",
                self.decimal(),
                self.person()
            ),
            5 => format!("{} lives in {}", self.person(), self.pick(PLACES)),
            6 => format!("{} joined {}", self.pick(NAMES), self.company()),
            7 => format!(
                "Did {} {} the {}?",
                self.person(),
                self.pick(BASE_VERBS),
                self.pick(NOUNS)
            ),
            8 => format!("What a {} that was!", self.pick(NOUNS)),
            9 => format!(
                "Wait... {} said the {} was dead.",
                self.pick(NAMES),
                self.pick(NOUNS)
            ),
            10 => format!(
                "Contact {}@{}.com for the {}.",
                self.pick(NAMES).to_lowercase(),
                self.pick(COMPANIES).to_lowercase(),
                self.pick(NOUNS)
            ),
            11 => format!(
                "{} were ${} million vs. ${} million a year earlier.",
                self.pick(METRICS),
                self.decimal(),
                self.decimal()
            ),
            12 => format!(
                "On {} {} the board of {} voted to {} the {}.",
                self.pick(MONTHS),
                self.rng.random_range(1..29),
                self.company(),
                self.pick(BASE_VERBS),
                self.pick(NOUNS)
            ),
            _ => format!(
                "{} {} {} percent to ${}.",
                self.pick(METRICS),
                self.pick(MOVES),
                self.decimal(),
                self.decimal()
            ),
        }
    }
}

/// `n` sentences drawn with a fixed seed.
pub fn generate(n: usize, seed: u64) -> AnnotatedCorpus {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let lines: Vec<String> = (0..n.max(1)).map(|_| g.sentence()).collect();
    AnnotatedCorpus::from_lines(lines).expect("generated sentences are never blank")
}
