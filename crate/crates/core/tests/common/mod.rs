#![allow(dead_code)]

use std::sync::Arc;

use biasaware::detector::{BiasDetector, ClassifyTool, Lexicon, LexiconDetector};
use biasaware::engine::ToolRegistry;
use biasaware::retriever::{ingest, Chunking, Document, Embedder, HashedEmbedder, RetrieveTool, VectorStore};
use biasaware::Label;

pub fn doc(id: &str, text: &str, label: Option<Label>) -> Document {
    Document {
        doc_id: id.into(),
        title: id.into(),
        body: text.into(),
        label,
        source: "test".into(),
    }
}

pub fn corpus() -> Vec<Document> {
    vec![
        doc("b1", "The radical regime is destroying the economy with reckless spending.", Some(Label::Biased)),
        doc("b2", "Corrupt elites slammed the outrageous propaganda about the election.", Some(Label::Biased)),
        doc("b3", "Hysterical alarmist zealots push a dangerous agenda on climate.", Some(Label::Biased)),
        doc("n1", "The central bank held interest rates steady on Tuesday.", Some(Label::NonBiased)),
        doc("n2", "Officials reported the election results after counting finished.", Some(Label::NonBiased)),
        doc("n3", "Researchers published a climate report with temperature data.", Some(Label::NonBiased)),
    ]
}

pub struct Agent {
    pub store: Arc<VectorStore>,
    pub registry: ToolRegistry,
}

pub fn agent(docs: &[Document]) -> Agent {
    let embedder: Arc<dyn Embedder> = Arc::new(HashedEmbedder::new(256).unwrap());
    let mut store = VectorStore::new(embedder.as_ref(), Chunking::new(200, 20).unwrap());
    ingest(docs, &mut store, embedder.as_ref()).unwrap();
    let store = Arc::new(store);
    let detector: Arc<dyn BiasDetector> = Arc::new(LexiconDetector::new(Lexicon::builtin()));
    let registry = ToolRegistry::builder()
        .register(RetrieveTool::new(store.clone(), embedder).spec())
        .unwrap()
        .register(ClassifyTool::new(detector).spec())
        .unwrap()
        .build();
    Agent { store, registry }
}
