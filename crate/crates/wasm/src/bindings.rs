use wasm_bindgen::prelude::*;

#[wasm_bindgen(js_name = Configurator)]
pub struct JsConfigurator(crate::Configurator);

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen(js_class = Configurator)]
impl JsConfigurator {
    #[wasm_bindgen(constructor)]
    pub fn new(problem_json: &str) -> Result<JsConfigurator, JsError> {
        crate::Configurator::new(problem_json).map(JsConfigurator).map_err(js)
    }

    pub fn variables(&self) -> Vec<String> {
        self.0.variables()
    }

    pub fn append(&mut self, variable: &str, text: &str) -> Result<(), JsError> {
        self.0.append(variable, text).map_err(js)
    }

    pub fn complete(&mut self, variable: &str) -> Result<(), JsError> {
        self.0.complete(variable).map_err(js)
    }

    pub fn undo(&mut self) -> Result<(), JsError> {
        self.0.undo().map_err(js)
    }

    #[wasm_bindgen(js_name = setValue)]
    pub fn set_value(&mut self, variable: &str, text: &str) -> Result<(), JsError> {
        self.0.set_value(variable, text).map_err(js)
    }

    pub fn reset(&mut self) {
        self.0.reset()
    }

    /// Form state as JSON.
    pub fn state(&self) -> String {
        self.0.state_json()
    }

    pub fn inspect(&self, variable: &str) -> Result<String, JsError> {
        self.0.inspect(variable).map_err(js)
    }
}
