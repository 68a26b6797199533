//! JSON Lines datasets: one object per line with `url`, `date`, `title`,
//! `content` and the optional booleans `fake_news` and `click_bait`.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use fakenews_core::corpus::{Article, Dataset, Item, Labels};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
struct RawRecord {
    #[serde(default)]
    url: String,
    #[serde(default)]
    date: String,
    title: Option<String>,
    content: Option<String>,
    fake_news: Option<bool>,
    click_bait: Option<bool>,
}

#[derive(Serialize)]
struct OutRecord<'a> {
    url: &'a str,
    date: &'a str,
    title: &'a str,
    content: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    fake_news: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    click_bait: Option<bool>,
}

/// Parses one line into an article with the given id. A missing
/// `click_bait` next to a present `fake_news` reads as `false`.
pub fn parse_line(line: &str, id: u64) -> std::result::Result<Item, String> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let title = raw.title.ok_or("missing field `title`")?;
    let content = raw.content.ok_or("missing field `content`")?;
    let labels = match (raw.fake_news, raw.click_bait) {
        (None, None) => None,
        (None, Some(_)) => return Err("`click_bait` given without `fake_news`".into()),
        (Some(f), c) => Some(Labels { is_fake: f, is_clickbait: c.unwrap_or(false) }),
    };
    Ok(Item { article: Article { id, url: raw.url, date: raw.date, title, content }, labels })
}

fn lines(path: &Path) -> Result<impl Iterator<Item = (usize, std::io::Result<String>)>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(BufReader::new(file).lines().enumerate().map(|(i, l)| (i + 1, l)))
}

/// Loads a dataset strictly; the first bad line aborts with its number.
/// Blank lines are ignored and ids are assigned sequentially.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let mut items = Vec::new();
    for (line_no, line) in lines(path)? {
        let line = line.map_err(|e| CliError::format(path, format!("line {line_no}: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let item = parse_line(&line, items.len() as u64)
            .map_err(|m| CliError::format(path, format!("line {line_no}: {m}")))?;
        items.push(item);
    }
    Ok(Dataset::new(items))
}

/// Articles that parsed, tagged with their 0-based line index, and the
/// number of malformed lines skipped.
#[derive(Debug, Default)]
pub struct LenientLoad {
    pub items: Vec<(u64, Item)>,
    pub skipped: usize,
}

pub fn load_dataset_lenient(path: &Path) -> Result<LenientLoad> {
    let mut out = LenientLoad::default();
    for (line_no, line) in lines(path)? {
        let parsed = line.map_err(|e| e.to_string()).and_then(|l| {
            if l.trim().is_empty() {
                Ok(None)
            } else {
                parse_line(&l, line_no as u64 - 1).map(Some)
            }
        });
        match parsed {
            Ok(Some(item)) => out.items.push((line_no as u64 - 1, item)),
            Ok(None) => {}
            Err(m) => {
                log::warn!("{}: skipping line {line_no}: {m}", path.display());
                out.skipped += 1;
            }
        }
    }
    Ok(out)
}

pub fn write_dataset(out: &mut impl Write, d: &Dataset) -> std::io::Result<()> {
    for item in d.items() {
        let a = &item.article;
        let rec = OutRecord {
            url: &a.url,
            date: &a.date,
            title: &a.title,
            content: &a.content,
            fake_news: item.labels.map(|l| l.is_fake),
            click_bait: item.labels.map(|l| l.is_clickbait),
        };
        serde_json::to_writer(&mut *out, &rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn save_dataset(path: &Path, d: &Dataset) -> Result<()> {
    let mut buf = Vec::new();
    write_dataset(&mut buf, d).map_err(|e| CliError::io(path, e))?;
    super::write_atomic(path, &buf)
}
