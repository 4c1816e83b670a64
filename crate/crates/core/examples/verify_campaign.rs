//! Runs a seeded verification campaign and prints the text report.

use hksym::verify::Campaign;

fn main() -> hksym::Result<()> {
    let spaces = vec!["su:1,1".parse()?, "sp:2".parse()?];
    let params = vec!["1,0,0,+1".parse()?, "0.5,0.3,-0.2,+1".parse()?];
    let mut campaign = Campaign::new(spaces, params);
    campaign.seed = 42;
    campaign.samples = 30;
    let report = campaign.run()?;
    print!("{}", report.render_text());
    println!("all as expected: {}", report.all_expected());
    Ok(())
}
