use super::ExtractError;

/// A reference-extraction service that turns a PDF into TEI XML.
pub trait ReferenceService: Send + Sync {
    fn process_references(&self, pdf: &[u8]) -> Result<String, ExtractError>;

    /// Reported service version, recorded next to cached TEI.
    fn version(&self) -> Option<String> {
        None
    }
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Base URL of a Grobid-compatible server, e.g. `http://localhost:8070`.
    pub base_url: String,
    pub timeout: std::time::Duration,
    /// Ask the service to consolidate citations (off matches its defaults).
    pub consolidate: bool,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            base_url: "http://localhost:8070".into(),
            timeout: std::time::Duration::from_secs(120),
            consolidate: false,
        }
    }
}

#[cfg(feature = "http")]
pub use grobid::GrobidClient;

#[cfg(feature = "http")]
mod grobid {
    use std::sync::OnceLock;

    use reqwest::blocking::{multipart, Client};

    use super::{ExtractError, ReferenceService, ServiceConfig};

    /// `POST {base}/api/processReferences` with the PDF as multipart `input`.
    pub struct GrobidClient {
        client: Client,
        config: ServiceConfig,
        version: OnceLock<Option<String>>,
    }

    impl GrobidClient {
        pub fn new(config: ServiceConfig) -> Result<Self, ExtractError> {
            let client = Client::builder()
                .timeout(config.timeout)
                .build()
                .map_err(|e| ExtractError::Service(e.to_string()))?;
            Ok(GrobidClient {
                client,
                config,
                version: OnceLock::new(),
            })
        }

        fn url(&self, path: &str) -> String {
            format!("{}{}", self.config.base_url.trim_end_matches('/'), path)
        }
    }

    impl ReferenceService for GrobidClient {
        fn process_references(&self, pdf: &[u8]) -> Result<String, ExtractError> {
            let part = multipart::Part::bytes(pdf.to_vec())
                .file_name("input.pdf")
                .mime_str("application/pdf")
                .map_err(|e| ExtractError::Service(e.to_string()))?;
            let form = multipart::Form::new()
                .part("input", part)
                .text("consolidateCitations", if self.config.consolidate { "1" } else { "0" });
            let resp = self
                .client
                .post(self.url("/api/processReferences"))
                .header("Accept", "application/xml")
                .multipart(form)
                .send()
                .map_err(|e| ExtractError::Service(e.to_string()))?;
            let status = resp.status();
            // 204: the service found no references.
            if status.as_u16() == 204 {
                return Ok(String::new());
            }
            if !status.is_success() {
                return Err(ExtractError::Service(format!("HTTP {}", status.as_u16())));
            }
            resp.text().map_err(|e| ExtractError::Service(e.to_string()))
        }

        fn version(&self) -> Option<String> {
            self.version
                .get_or_init(|| {
                    self.client
                        .get(self.url("/api/version"))
                        .send()
                        .ok()
                        .filter(|r| r.status().is_success())
                        .and_then(|r| r.text().ok())
                        .map(|s| s.trim().to_string())
                })
                .clone()
        }
    }
}
