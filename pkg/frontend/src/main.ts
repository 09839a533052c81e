import { HttpApi } from "./api.js";
import { mountApp } from "./app.js";

const root = document.querySelector<HTMLElement>("#app");
if (!root) throw new Error("missing #app mount point");
mountApp(root, new HttpApi());
