use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::pos::PosTag;
use crate::{Error, Result};

/// Language-specific resources consumed by the text primitives.
#[derive(Debug, Clone, PartialEq)]
pub struct LanguageProfile {
    vowels: BTreeSet<char>,
    stopwords: BTreeSet<String>,
    pos_lexicon: BTreeMap<String, PosTag>,
    /// Ordered by priority; the first matching suffix wins.
    suffix_rules: Vec<(String, PosTag)>,
    abbreviations: BTreeSet<String>,
}

const BG_VOWELS: &str = "аъоуеиюяѝ";
const LATIN_VOWELS: &str = "aeiouy";

const BG_STOPWORDS: &str = "а аз ако ами без би бил била били било бъде бяха беше в вас ви во вие вече във все всеки всички всичко всяка въпреки
го да дали до докато дори е едва ето за защо зад и или им има има ли като как каква какво както кога кой която което които кои към ли
ме между ми много може му на над най нас не него нещо нея ни ние никой нито но някой някои обаче около от отново още пак по под поне
при през преди с са сам само се след сега си сме със сте съм също та така там те тези ти то това този той тук тя тях у че ще я";

const BG_ABBREVIATIONS: &str = "г. гр. ул. бул. др. т.е. т.н. напр. проф. доц. акад. д-р. инж. млн. млрд. хил. лв. св. стр. вж. чл. ал. с. обл. mr. mrs. dr. vs. etc.";

const BG_POS: &[(&str, &str)] = &[
    ("PRON", "аз ти той тя то ние вие те мен теб него нея нас вас тях ме го я ни ви ги ми му ѝ им си се себе кой коя кое кои който която което които това този тази тези онзи онази онова онези нещо някой някоя някои никой нищо всеки всяка всяко всичко всички свой своя свое свои мой моя мое мои твой негов неин наш ваш техен какво"),
    ("ADP", "в във на с със за от до при по към през след пред преди над под без между срещу около чрез освен покрай сред според у"),
    ("CONJ", "и а но или че ако както защото докато обаче нито та ала понеже макар щом сякаш така че"),
    ("PART", "не ли да ще дали нали даже дори само ето нека бе май уж нима"),
    ("ADV", "много малко вече днес утре вчера сега тук там така винаги никога често рядко бързо бавно добре зле почти също отново още скоро късно рано най по наистина изобщо просто"),
    ("VERB", "е са съм си сме сте бях беше бяха бъде бъдат бил била било били има няма имат нямат може могат трябва каза казва казват стана става"),
    ("NUM", "един една едно два две три четири пет шест седем осем девет десет двадесет сто хиляда хиляди милион милиона милиард първи втори трети"),
    ("ADJ", "нов нова ново нови голям голяма голямо големи малък малка малко малки добър добра добро добри лош лоша лошо лоши стар стара старо стари"),
];

const BG_SUFFIXES: &[(&str, &str)] = &[
    ("ството", "NOUN"), ("ността", "NOUN"), ("ията", "NOUN"), ("ция", "NOUN"), ("ство", "NOUN"),
    ("ност", "NOUN"), ("изъм", "NOUN"), ("ник", "NOUN"), ("ист", "NOUN"), ("ове", "NOUN"), ("ища", "NOUN"),
    ("ският", "ADJ"), ("ската", "ADJ"), ("ското", "ADJ"), ("ските", "ADJ"), ("ният", "ADJ"), ("ната", "ADJ"),
    ("ното", "ADJ"), ("ните", "ADJ"),
    ("ваме", "VERB"), ("вате", "VERB"), ("ват", "VERB"), ("ахме", "VERB"), ("яхме", "VERB"), ("аше", "VERB"),
    ("еше", "VERB"), ("али", "VERB"), ("ели", "VERB"), ("ила", "VERB"), ("ило", "VERB"), ("ил", "VERB"),
    ("ва", "VERB"), ("ат", "VERB"), ("ят", "VERB"), ("ем", "VERB"), ("им", "VERB"),
    ("ски", "ADJ"), ("ска", "ADJ"), ("ско", "ADJ"), ("ична", "ADJ"), ("ичен", "ADJ"), ("ен", "ADJ"), ("ова", "ADJ"),
    ("ично", "ADV"), ("ешно", "ADV"),
    ("ия", "NOUN"), ("ът", "NOUN"), ("та", "NOUN"), ("то", "NOUN"), ("те", "NOUN"), ("ие", "NOUN"), ("ка", "NOUN"),
    ("ing", "VERB"), ("ed", "VERB"), ("ly", "ADV"), ("tion", "NOUN"), ("ness", "NOUN"), ("ous", "ADJ"), ("ful", "ADJ"),
];

impl LanguageProfile {
    /// An empty profile with the given vowel set.
    pub fn new(vowels: impl IntoIterator<Item = char>) -> Self {
        Self {
            vowels: vowels.into_iter().flat_map(char::to_lowercase).collect(),
            stopwords: BTreeSet::new(),
            pos_lexicon: BTreeMap::new(),
            suffix_rules: Vec::new(),
            abbreviations: BTreeSet::new(),
        }
    }

    /// Built-in profile for Bulgarian news text (Latin vowels included for
    /// the English words that show up in it).
    pub fn bulgarian() -> Self {
        let mut p = Self::new(BG_VOWELS.chars().chain(LATIN_VOWELS.chars()));
        p.stopwords = BG_STOPWORDS.split_whitespace().map(String::from).collect();
        p.abbreviations = BG_ABBREVIATIONS.split_whitespace().map(String::from).collect();
        for (tag, words) in BG_POS {
            let tag: PosTag = tag.parse().expect("built-in tag");
            for w in words.split_whitespace() {
                p.pos_lexicon.entry(w.into()).or_insert(tag);
            }
        }
        p.suffix_rules =
            BG_SUFFIXES.iter().map(|(s, t)| ((*s).to_string(), t.parse().expect("built-in tag"))).collect();
        p
    }

    pub fn is_vowel(&self, c: char) -> bool {
        self.vowels.contains(&c)
    }

    pub fn is_stopword(&self, lower: &str) -> bool {
        self.stopwords.contains(lower)
    }

    pub fn is_abbreviation(&self, lower_with_dot: &str) -> bool {
        self.abbreviations.contains(lower_with_dot)
    }

    pub fn lookup_pos(&self, lower: &str) -> Option<PosTag> {
        self.pos_lexicon.get(lower).copied()
    }

    pub fn suffix_rules(&self) -> &[(String, PosTag)] {
        &self.suffix_rules
    }

    pub fn stopwords(&self) -> &BTreeSet<String> {
        &self.stopwords
    }

    pub fn set_vowels(&mut self, vowels: impl IntoIterator<Item = char>) {
        self.vowels = vowels.into_iter().flat_map(char::to_lowercase).collect();
    }

    pub fn set_stopwords(&mut self, text: &str) {
        self.stopwords = parse_word_list(text);
    }

    pub fn set_abbreviations(&mut self, text: &str) {
        self.abbreviations = parse_word_list(text);
    }

    /// Replaces the POS lexicon from `word<TAB>TAG` lines.
    pub fn set_pos_lexicon(&mut self, text: &str) -> Result<()> {
        self.pos_lexicon = parse_tagged_lines(text)?.into_iter().collect();
        Ok(())
    }

    /// Replaces the suffix rules from `suffix<TAB>TAG` lines, highest priority first.
    pub fn set_suffix_rules(&mut self, text: &str) -> Result<()> {
        self.suffix_rules = parse_tagged_lines(text)?;
        Ok(())
    }
}

fn parse_word_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

fn parse_tagged_lines(text: &str) -> Result<Vec<(String, PosTag)>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, tag) = line
            .split_once('\t')
            .ok_or_else(|| Error::Parse { line: idx + 1, message: "expected `word<TAB>TAG`".into() })?;
        let tag = tag
            .trim()
            .parse::<PosTag>()
            .map_err(|_| Error::Parse { line: idx + 1, message: format!("unknown tag `{}`", tag.trim()) })?;
        out.push((word.trim().to_lowercase(), tag));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_profile_is_consistent() {
        let p = LanguageProfile::bulgarian();
        assert!(p.is_vowel('а') && p.is_vowel('ъ') && !p.is_vowel('б'));
        assert!(p.is_stopword("и"));
        assert_eq!(p.lookup_pos("в"), Some(PosTag::Adp));
        assert!(p.suffix_rules().iter().all(|(_, t)| PosTag::ALL.contains(t)));
    }

    #[test]
    fn parses_resource_files() {
        let mut p = LanguageProfile::new("aeiou".chars());
        p.set_pos_lexicon("run\tVERB\n# comment\n\ncat\tNOUN\n").unwrap();
        assert_eq!(p.lookup_pos("cat"), Some(PosTag::Noun));
        p.set_suffix_rules("ing\tVERB\nly\tADV").unwrap();
        assert_eq!(p.suffix_rules().len(), 2);
        let err = p.set_pos_lexicon("ok\tNOUN\nbad line").unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, message: "expected `word<TAB>TAG`".into() });
        assert!(matches!(p.set_suffix_rules("x\tDET"), Err(Error::Parse { line: 1, .. })));
        p.set_stopwords("The\nа\n");
        assert!(p.is_stopword("the"));
    }
}
