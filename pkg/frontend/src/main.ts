import { ApiClient } from "./api.js";
import { ConsoleApp } from "./app.js";

const root = document.getElementById("app");
if (root === null) {
  throw new Error("console bootstrap: #app element missing");
}
// same-origin service; the console is served by it under /console
const api = new ApiClient({ baseUrl: "", expertId: "expert" });
new ConsoleApp(api, root).start();
