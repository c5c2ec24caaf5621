//! Country identity: canonical ISO 3166-1 alpha-3 codes, display names, and
//! tolerant name resolution.
//!
//! Dataset editions and geometry files spell country names differently
//! ("Korea, Rep.", "South Korea", "Republic of Korea"), so joins are always
//! done on codes. Resolution is case- and punctuation-insensitive against a
//! built-in alias table plus user-supplied overrides; anything unmatched is
//! returned as [`Resolution::Unresolved`], never guessed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Canonical country identifier: an ISO 3166-1 alpha-3 code.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountryId(String);

impl CountryId {
    /// Accepts exactly three ASCII letters, normalized to uppercase.
    pub fn new(code: &str) -> Result<Self> {
        if code.len() == 3 && code.chars().all(|c| c.is_ascii_alphabetic()) {
            Ok(CountryId(code.to_ascii_uppercase()))
        } else {
            Err(Error::InvalidCountryCode(code.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CountryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Outcome of a name lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    Resolved(CountryId),
    Unresolved(String),
}

impl Resolution {
    pub fn resolved(&self) -> Option<&CountryId> {
        match self {
            Resolution::Resolved(id) => Some(id),
            Resolution::Unresolved(_) => None,
        }
    }
}

/// User-supplied raw-name to code overrides, consulted before the built-in
/// table. Keys are matched with the same normalization as table names.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NameOverrides {
    map: BTreeMap<String, CountryId>,
}

impl NameOverrides {
    pub fn new(pairs: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (raw, code) in pairs {
            map.insert(normalize_key(&raw), CountryId::new(&code)?);
        }
        Ok(NameOverrides { map })
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn lookup(&self, key: &str) -> Option<&CountryId> {
        self.map.get(key)
    }
}

/// Resolve a raw country name to its canonical code.
///
/// Overrides win over the table; bare alpha-3 codes resolve to themselves
/// when the table knows them. Unmatched input is returned unresolved.
pub fn normalize_country_name(raw: &str, overrides: &NameOverrides) -> Resolution {
    let key = normalize_key(raw);
    if key.is_empty() {
        return Resolution::Unresolved(raw.to_string());
    }
    if let Some(id) = overrides.lookup(&key) {
        return Resolution::Resolved(id.clone());
    }
    if let Some(code) = alias_index().get(key.as_str()) {
        return Resolution::Resolved(CountryId(code.to_string()));
    }
    Resolution::Unresolved(raw.to_string())
}

/// English display name for a known code; `None` when the code is not in
/// the built-in table.
pub fn display_name(id: &CountryId) -> Option<&'static str> {
    TABLE
        .iter()
        .find(|(code, _, _)| *code == id.as_str())
        .map(|(_, name, _)| *name)
}

/// Display name with the code itself as fallback (overrides may introduce
/// codes the table does not know).
pub fn display_name_or_code(id: &CountryId) -> String {
    display_name(id)
        .map(str::to_string)
        .unwrap_or_else(|| id.to_string())
}

/// Lowercase, fold common diacritics to ASCII, drop punctuation, collapse
/// whitespace.
fn normalize_key(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for c in raw.trim().to_lowercase().chars() {
        match c {
            'á' | 'à' | 'â' | 'ä' | 'ã' | 'å' => out.push('a'),
            'é' | 'è' | 'ê' | 'ë' => out.push('e'),
            'í' | 'ì' | 'î' | 'ï' => out.push('i'),
            'ó' | 'ò' | 'ô' | 'ö' | 'õ' | 'ø' => out.push('o'),
            'ú' | 'ù' | 'û' | 'ü' => out.push('u'),
            'ñ' => out.push('n'),
            'ç' => out.push('c'),
            'ý' | 'ÿ' => out.push('y'),
            'æ' => out.push_str("ae"),
            'œ' => out.push_str("oe"),
            'ß' => out.push_str("ss"),
            '&' => out.push_str(" and "),
            '-' | '–' | '—' | '/' => out.push(' '),
            '.' | ',' | '\'' | '’' | '"' | '(' | ')' | '*' => {}
            c if c.is_whitespace() => out.push(' '),
            c => out.push(c),
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn alias_index() -> &'static HashMap<&'static str, &'static str> {
    static INDEX: OnceLock<HashMap<&'static str, &'static str>> = OnceLock::new();
    INDEX.get_or_init(|| {
        let mut map: HashMap<&'static str, &'static str> = HashMap::new();
        let mut insert = |key: String, code: &'static str| {
            let leaked: &'static str = Box::leak(key.into_boxed_str());
            if let Some(prev) = map.insert(leaked, code) {
                debug_assert_eq!(prev, code, "alias {leaked:?} maps to two codes");
            }
        };
        for (code, name, aliases) in TABLE {
            insert(normalize_key(code), code);
            insert(normalize_key(name), code);
            for alias in *aliases {
                insert(normalize_key(alias), code);
            }
        }
        map
    })
}

/// (alpha-3, display name, alternate spellings). Alternates cover the name
/// forms used by the Fraser dataset, World Bank exports, and common usage.
static TABLE: &[(&str, &str, &[&str])] = &[
    ("AFG", "Afghanistan", &[]),
    ("AGO", "Angola", &[]),
    ("ALB", "Albania", &[]),
    ("ARE", "United Arab Emirates", &["UAE"]),
    ("ARG", "Argentina", &[]),
    ("ARM", "Armenia", &[]),
    ("AUS", "Australia", &[]),
    ("AUT", "Austria", &[]),
    ("AZE", "Azerbaijan", &[]),
    ("BDI", "Burundi", &[]),
    ("BEL", "Belgium", &[]),
    ("BEN", "Benin", &[]),
    ("BFA", "Burkina Faso", &[]),
    ("BGD", "Bangladesh", &[]),
    ("BGR", "Bulgaria", &[]),
    ("BHR", "Bahrain", &[]),
    ("BHS", "Bahamas", &["Bahamas, The", "The Bahamas"]),
    (
        "BIH",
        "Bosnia and Herzegovina",
        &["Bosnia & Herzegovina", "Bosnia-Herzegovina", "Bosnia"],
    ),
    ("BLR", "Belarus", &[]),
    ("BLZ", "Belize", &[]),
    ("BOL", "Bolivia", &["Bolivia, Plurinational State of"]),
    ("BRA", "Brazil", &[]),
    ("BRB", "Barbados", &[]),
    ("BRN", "Brunei Darussalam", &["Brunei"]),
    ("BTN", "Bhutan", &[]),
    ("BWA", "Botswana", &[]),
    ("CAF", "Central African Republic", &["Central African Rep"]),
    ("CAN", "Canada", &[]),
    ("CHE", "Switzerland", &[]),
    ("CHL", "Chile", &[]),
    (
        "CHN",
        "China",
        &["People's Republic of China", "China, People's Republic of"],
    ),
    ("CIV", "Cote d'Ivoire", &["Côte d'Ivoire", "Ivory Coast"]),
    ("CMR", "Cameroon", &[]),
    (
        "COD",
        "Congo, Dem. Rep.",
        &[
            "Congo, Dem Rep",
            "Democratic Republic of the Congo",
            "Democratic Republic of Congo",
            "Congo, Democratic Republic of",
            "DR Congo",
            "Congo-Kinshasa",
            "Zaire",
        ],
    ),
    (
        "COG",
        "Congo, Rep.",
        &[
            "Congo, Rep",
            "Republic of the Congo",
            "Republic of Congo",
            "Congo Republic",
            "Congo-Brazzaville",
            "Congo",
        ],
    ),
    ("COL", "Colombia", &[]),
    ("CPV", "Cape Verde", &["Cabo Verde"]),
    ("CRI", "Costa Rica", &[]),
    ("CUB", "Cuba", &[]),
    ("CYP", "Cyprus", &[]),
    ("CZE", "Czech Republic", &["Czechia"]),
    ("DEU", "Germany", &[]),
    ("DJI", "Djibouti", &[]),
    ("DNK", "Denmark", &[]),
    ("DOM", "Dominican Republic", &["Dominican Rep"]),
    ("DZA", "Algeria", &[]),
    ("ECU", "Ecuador", &[]),
    (
        "EGY",
        "Egypt",
        &["Egypt, Arab Rep", "Arab Republic of Egypt"],
    ),
    ("ESP", "Spain", &[]),
    ("EST", "Estonia", &[]),
    ("ETH", "Ethiopia", &[]),
    ("FIN", "Finland", &[]),
    ("FJI", "Fiji", &[]),
    ("FRA", "France", &[]),
    ("GAB", "Gabon", &[]),
    ("GBR", "United Kingdom", &["UK", "Great Britain", "Britain"]),
    ("GEO", "Georgia", &[]),
    ("GHA", "Ghana", &[]),
    ("GIN", "Guinea", &[]),
    ("GMB", "Gambia", &["Gambia, The", "The Gambia"]),
    ("GNB", "Guinea-Bissau", &[]),
    ("GRC", "Greece", &[]),
    ("GTM", "Guatemala", &[]),
    ("GUY", "Guyana", &[]),
    (
        "HKG",
        "Hong Kong",
        &[
            "Hong Kong SAR, China",
            "Hong Kong SAR",
            "China, Hong Kong SAR",
            "Hong Kong, China",
        ],
    ),
    ("HND", "Honduras", &[]),
    ("HRV", "Croatia", &[]),
    ("HTI", "Haiti", &[]),
    ("HUN", "Hungary", &[]),
    ("IDN", "Indonesia", &[]),
    ("IND", "India", &[]),
    ("IRL", "Ireland", &[]),
    (
        "IRN",
        "Iran",
        &[
            "Iran, Islamic Rep",
            "Islamic Republic of Iran",
            "Iran, Islamic Republic of",
        ],
    ),
    ("IRQ", "Iraq", &[]),
    ("ISL", "Iceland", &[]),
    ("ISR", "Israel", &[]),
    ("ITA", "Italy", &[]),
    ("JAM", "Jamaica", &[]),
    ("JOR", "Jordan", &[]),
    ("JPN", "Japan", &[]),
    ("KAZ", "Kazakhstan", &[]),
    ("KEN", "Kenya", &[]),
    ("KGZ", "Kyrgyz Republic", &["Kyrgyzstan"]),
    ("KHM", "Cambodia", &[]),
    (
        "KOR",
        "South Korea",
        &[
            "Korea, Rep",
            "Republic of Korea",
            "Korea, South",
            "Korea, Republic of",
        ],
    ),
    ("KWT", "Kuwait", &[]),
    (
        "LAO",
        "Laos",
        &["Lao PDR", "Lao People's Democratic Republic"],
    ),
    ("LBN", "Lebanon", &[]),
    ("LBR", "Liberia", &[]),
    ("LBY", "Libya", &[]),
    ("LKA", "Sri Lanka", &[]),
    ("LSO", "Lesotho", &[]),
    ("LTU", "Lithuania", &[]),
    ("LUX", "Luxembourg", &[]),
    ("LVA", "Latvia", &[]),
    ("MAR", "Morocco", &[]),
    ("MDA", "Moldova", &["Moldova, Rep", "Republic of Moldova"]),
    ("MDG", "Madagascar", &[]),
    ("MEX", "Mexico", &[]),
    (
        "MKD",
        "North Macedonia",
        &["Macedonia", "Macedonia, FYR", "FYR Macedonia"],
    ),
    ("MLI", "Mali", &[]),
    ("MLT", "Malta", &[]),
    ("MMR", "Myanmar", &["Burma"]),
    ("MNE", "Montenegro", &[]),
    ("MNG", "Mongolia", &[]),
    ("MOZ", "Mozambique", &[]),
    ("MRT", "Mauritania", &[]),
    ("MUS", "Mauritius", &[]),
    ("MWI", "Malawi", &[]),
    ("MYS", "Malaysia", &[]),
    ("NAM", "Namibia", &[]),
    ("NER", "Niger", &[]),
    ("NGA", "Nigeria", &[]),
    ("NIC", "Nicaragua", &[]),
    (
        "NLD",
        "Netherlands",
        &["Netherlands, The", "The Netherlands", "Holland"],
    ),
    ("NOR", "Norway", &[]),
    ("NPL", "Nepal", &[]),
    ("NZL", "New Zealand", &[]),
    ("OMN", "Oman", &[]),
    ("PAK", "Pakistan", &[]),
    ("PAN", "Panama", &[]),
    ("PER", "Peru", &[]),
    (
        "PHL",
        "Philippines",
        &["Philippines, The", "The Philippines"],
    ),
    ("PNG", "Papua New Guinea", &[]),
    ("POL", "Poland", &[]),
    (
        "PRK",
        "North Korea",
        &[
            "Korea, Dem. People's Rep",
            "Korea, North",
            "Democratic People's Republic of Korea",
        ],
    ),
    ("PRT", "Portugal", &[]),
    ("PRY", "Paraguay", &[]),
    ("QAT", "Qatar", &[]),
    ("ROU", "Romania", &["Rumania"]),
    ("RUS", "Russia", &["Russian Federation"]),
    ("RWA", "Rwanda", &[]),
    ("SAU", "Saudi Arabia", &[]),
    ("SDN", "Sudan", &[]),
    ("SEN", "Senegal", &[]),
    ("SGP", "Singapore", &[]),
    ("SLE", "Sierra Leone", &[]),
    ("SLV", "El Salvador", &[]),
    ("SOM", "Somalia", &[]),
    ("SRB", "Serbia", &["Republic of Serbia"]),
    ("SUR", "Suriname", &[]),
    ("SVK", "Slovakia", &["Slovak Republic"]),
    ("SVN", "Slovenia", &[]),
    ("SWE", "Sweden", &[]),
    ("SWZ", "Eswatini", &["Swaziland"]),
    ("SYC", "Seychelles", &[]),
    ("SYR", "Syria", &["Syrian Arab Republic"]),
    ("TCD", "Chad", &[]),
    ("TGO", "Togo", &[]),
    ("THA", "Thailand", &[]),
    ("TJK", "Tajikistan", &[]),
    ("TKM", "Turkmenistan", &[]),
    ("TLS", "Timor-Leste", &["East Timor"]),
    ("TTO", "Trinidad and Tobago", &["Trinidad & Tobago"]),
    ("TUN", "Tunisia", &[]),
    ("TUR", "Turkey", &["Türkiye", "Turkiye"]),
    ("TWN", "Taiwan", &["Chinese Taipei", "Taiwan, China"]),
    (
        "TZA",
        "Tanzania",
        &["Tanzania, United Rep", "United Republic of Tanzania"],
    ),
    ("UGA", "Uganda", &[]),
    ("UKR", "Ukraine", &[]),
    ("URY", "Uruguay", &[]),
    (
        "USA",
        "United States",
        &["USA", "US", "United States of America", "America"],
    ),
    ("UZB", "Uzbekistan", &[]),
    (
        "VEN",
        "Venezuela",
        &["Venezuela, RB", "Venezuela, Bolivarian Republic of"],
    ),
    ("VNM", "Vietnam", &["Viet Nam"]),
    ("XKX", "Kosovo", &["Republic of Kosovo"]),
    ("YEM", "Yemen", &["Yemen, Rep", "Republic of Yemen"]),
    ("ZAF", "South Africa", &[]),
    ("ZMB", "Zambia", &[]),
    ("ZWE", "Zimbabwe", &[]),
];
